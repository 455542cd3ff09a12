//! Type-homogeneous block sequences: `A in FIN_1^{[m]}(n)` such that the
//! color of `p in FIN_k^{[d]}(A)` depends only on the type of `p`.

use std::collections::HashMap;

use super::gowers::prefix_order;
use super::{index_of, scan_min, Check, Instance, MinOutcome, Problem, SearchConfig};
use crate::cert::{params, TheoremId};
use crate::error::{Error, Result};
use crate::fin::{enumerate_block_sequences, BlockSequence, FinElement};
use crate::types::{enumerate_tuple_types, map_tuple_type, TupleType};

fn validate(k: u8, m: usize, d: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter("need k >= 1".into()));
    }
    if d < 1 || d > m {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= m (d={d}, m={m})")));
    }
    Ok(())
}

/// Block sequences of length `len` whose entries are unions of blocks of `a`.
fn unions_of(a: &BlockSequence, len: usize) -> Result<Vec<BlockSequence>> {
    let width = a.width();
    let mut out = Vec::new();
    for pat in enumerate_block_sequences(1, a.len(), len)? {
        let entries = pat
            .entries()
            .iter()
            .map(|sel| {
                let positions: Vec<usize> = sel.support().flat_map(|j| a.entries()[j].support()).collect();
                FinElement::indicator(1, width, &positions, 1)
            })
            .collect();
        out.push(BlockSequence::new(entries)?);
    }
    Ok(out)
}

/// `FIN_k^{[d]}(A)` grouped by type.
fn classes_by_type(a: &BlockSequence, types: &[TupleType]) -> Result<Vec<Vec<BlockSequence>>> {
    let mut by_len: HashMap<usize, Vec<BlockSequence>> = HashMap::new();
    let mut out = Vec::with_capacity(types.len());
    for phi in types {
        let len = phi.total_len();
        if !by_len.contains_key(&len) {
            by_len.insert(len, unions_of(a, len)?);
        }
        let class = by_len[&len].iter().map(|b| map_tuple_type(phi, b)).collect::<Result<Vec<_>>>()?;
        out.push(class);
    }
    Ok(out)
}

/// Points `FIN_k^{[d]}(n)`; per `A in FIN_1^{[m]}(n)` one constraint whose
/// classes are the type classes of `FIN_k^{[d]}(A)`.
pub fn type_hom_instance(k: u8, m: usize, d: usize, r: u8, n: usize) -> Result<Instance> {
    validate(k, m, d)?;
    let points = prefix_order(enumerate_block_sequences(k, n, d)?);
    let index = index_of(&points);
    let types = enumerate_tuple_types(k, m, d);
    let mut raw = Vec::new();
    for a in enumerate_block_sequences(1, n, m)? {
        let classes = classes_by_type(&a, &types)?
            .into_iter()
            .map(|c| c.iter().map(|p| index[p]).collect())
            .collect();
        raw.push(classes);
    }
    Ok(Instance {
        theorem: TheoremId::TypeHom,
        params: params([("k", k as usize), ("m", m), ("d", d)]),
        n,
        objects: points.iter().map(BlockSequence::canonical).collect(),
        problem: Problem::new(points.len(), r, raw),
        filter: None,
    })
}

pub fn verify_type_homogeneous(k: u8, m: usize, d: usize, r: u8, n: usize, cfg: &SearchConfig) -> Result<Check> {
    Ok(super::check_instance(&type_hom_instance(k, m, d, r, n)?, cfg).0)
}

/// `T_d(k, m, r)` by linear scan from `n = m`.
pub fn min_type_homogeneous(k: u8, m: usize, d: usize, r: u8, cfg: &SearchConfig) -> Result<MinOutcome> {
    validate(k, m, d)?;
    scan_min(m, |n| type_hom_instance(k, m, d, r, n), cfg)
}

/// Least `A in FIN_1^{[m]}(n)` on which the coloring of `FIN_k^{[d]}(A)` is
/// constant on every type class, together with the color of each type.
pub fn find_type_homogeneous<F>(
    color: F,
    k: u8,
    m: usize,
    d: usize,
    n: usize,
) -> Result<Option<(BlockSequence, Vec<(TupleType, u8)>)>>
where
    F: FnMut(&BlockSequence) -> Result<u8>,
{
    validate(k, m, d)?;
    find_homogeneous_on_types(color, &enumerate_tuple_types(k, m, d), m, n)
}

/// Like [`find_type_homogeneous`], but only the listed type classes need to
/// be monochromatic.
pub fn find_homogeneous_on_types<F>(
    mut color: F,
    types: &[TupleType],
    m: usize,
    n: usize,
) -> Result<Option<(BlockSequence, Vec<(TupleType, u8)>)>>
where
    F: FnMut(&BlockSequence) -> Result<u8>,
{
    if let Some(phi) = types.iter().find(|phi| phi.total_len() > m) {
        return Err(Error::InvalidParameter(format!("type {} is longer than {m}", phi.canonical())));
    }
    let mut memo: HashMap<BlockSequence, u8> = HashMap::new();
    let mut lookup = |p: &BlockSequence| -> Result<u8> {
        if let Some(&c) = memo.get(p) {
            return Ok(c);
        }
        let c = color(p)?;
        memo.insert(p.clone(), c);
        Ok(c)
    };
    for a in enumerate_block_sequences(1, n, m)? {
        if let Some(colors) = homogeneous_colors(&mut lookup, &a, types)? {
            return Ok(Some((a, colors)));
        }
    }
    Ok(None)
}

/// The color of each listed type class of `FIN_k^{[d]}(A)`, or `None` if
/// some class is not monochromatic.
pub fn homogeneous_colors<F>(mut color: F, a: &BlockSequence, types: &[TupleType]) -> Result<Option<Vec<(TupleType, u8)>>>
where
    F: FnMut(&BlockSequence) -> Result<u8>,
{
    let mut colors = Vec::with_capacity(types.len());
    for (phi, class) in types.iter().zip(classes_by_type(a, types)?) {
        let mut seen = None;
        for p in &class {
            let c = color(p)?;
            match seen {
                None => seen = Some(c),
                Some(prev) if prev != c => return Ok(None),
                _ => {}
            }
        }
        if let Some(c) = seen {
            colors.push((phi.clone(), c));
        }
    }
    Ok(Some(colors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[u32]) -> BlockSequence {
        BlockSequence::new(vec![FinElement::new(2, v.len(), v).unwrap()]).unwrap()
    }

    #[test]
    fn separated_type_class_blocks_every_candidate() {
        // Width 2 has a single candidate A = ({1}, {2}); the type (2) class
        // is {[2,0], [0,2], [2,2]}.
        let sep = |p: &BlockSequence| -> Result<u8> {
            Ok(if *p == el(&[2, 0]) { 1 } else if *p == el(&[0, 2]) { 2 } else { 1 })
        };
        assert!(find_type_homogeneous(sep, 2, 2, 1, 2).unwrap().is_none());
        let (a, colors) = find_type_homogeneous(|_| Ok(1), 2, 2, 1, 2).unwrap().unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(colors.len(), enumerate_tuple_types(2, 2, 1).len());
    }

    #[test]
    fn level_one_matches_milliken_taylor() {
        let cfg = SearchConfig::default();
        let t = min_type_homogeneous(1, 2, 1, 2, &cfg).unwrap().value();
        let mt = super::super::mt::min_milliken_taylor(1, 2, 2, &cfg).unwrap().value();
        assert_eq!(t, mt);
        assert_eq!(t, Some(5));
    }
}
