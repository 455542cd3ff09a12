//! Experimental probe: monochromatic spans under the neighbour operations
//! `I_j = {0, l_j, l_j + 1}` with prescribed shifts `l_j < j`.

use super::gowers::prefix_order;
use super::{index_of, Check, Instance, Problem, SearchConfig};
use crate::cert::{params, TheoremId};
use crate::error::{Error, Result};
use crate::fin::{enumerate_block_sequences, span_d, span_monochromatic, BlockSequence, SpanQuery, SpanSelector};

/// Least `B in FIN_k^{[m]}(n)` with `<B>_I` monochromatic, `k = shifts.len()`.
pub fn probe_neighbour_span<F>(
    mut color: F,
    shifts: &[u8],
    m: usize,
    n: usize,
) -> Result<Option<(BlockSequence, u8)>>
where
    F: FnMut(&BlockSequence) -> Result<u8>,
{
    let sel = SpanSelector::neighbours(shifts)?;
    if m < 1 {
        return Err(Error::InvalidParameter("need m >= 1".into()));
    }
    for b in enumerate_block_sequences(sel.level(), n, m)? {
        if let Some(c) = span_monochromatic(&b, SpanQuery::Selector(&sel), 1, &mut color)? {
            return Ok(Some((b, c)));
        }
    }
    Ok(None)
}

/// Does every r-coloring of `FIN_k(n)` have a monochromatic neighbour span?
pub fn neighbour_instance(shifts: &[u8], m: usize, r: u8, n: usize) -> Result<Instance> {
    let sel = SpanSelector::neighbours(shifts)?;
    let k = sel.level();
    let points = prefix_order(enumerate_block_sequences(k, n, 1)?);
    let index = index_of(&points);
    let mut raw = Vec::new();
    for b in enumerate_block_sequences(k, n, m)? {
        raw.push(vec![span_d(&b, &sel, 1)?.iter().map(|t| index[t]).collect()]);
    }
    let mut p = params([("m", m)]);
    p.insert("shifts".into(), shifts.iter().map(|&s| s as u64).collect::<Vec<_>>().into());
    Ok(Instance {
        theorem: TheoremId::Neighbour,
        params: p,
        n,
        objects: points.iter().map(BlockSequence::canonical).collect(),
        problem: Problem::new(points.len(), r, raw),
        filter: None,
    })
}

pub fn verify_neighbour(shifts: &[u8], m: usize, r: u8, n: usize, cfg: &SearchConfig) -> Result<Check> {
    Ok(super::check_instance(&neighbour_instance(shifts, m, r, n)?, cfg).0)
}
