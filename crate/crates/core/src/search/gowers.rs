//! Combined-span witnesses: `<U_{i in P_{k+1}^l} T_i(B)>_{P_k}^{[d]}` monochromatic.

use std::collections::HashMap;

use super::{index_of, scan_min, Check, Instance, MinOutcome, Problem, SearchConfig};
use crate::cert::{params, Certificate, Payload, TheoremId};
use crate::coloring::Oracle;
use crate::error::{Error, Result};
use crate::fin::{combined_span_d, enumerate_block_sequences, BlockSequence};

pub(crate) fn validate(k: u8, l: u8, m: usize, d: usize) -> Result<()> {
    if k < 1 || k > l {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= l (k={k}, l={l})")));
    }
    if d < 1 || d > m {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= m (d={d}, m={m})")));
    }
    Ok(())
}

/// Block sequences ordered by last support position, then canonically, so
/// that objects living in a shorter prefix of positions come first.
pub(crate) fn prefix_order(mut seqs: Vec<BlockSequence>) -> Vec<BlockSequence> {
    seqs.sort_by_cached_key(|b| (b.entries().last().and_then(|e| e.max_support()), b.clone()));
    seqs
}

/// Points `FIN_k^{[d]}(n)`; one single-class constraint per `B in FIN_l^{[m]}(n)`.
pub fn gowers_instance(k: u8, l: u8, m: usize, d: usize, r: u8, n: usize) -> Result<Instance> {
    validate(k, l, m, d)?;
    let points = prefix_order(enumerate_block_sequences(k, n, d)?);
    let index = index_of(&points);
    let mut raw = Vec::new();
    for b in enumerate_block_sequences(l, n, m)? {
        let class = combined_span_d(&b, k, d)?.iter().map(|t| index[t]).collect();
        raw.push(vec![class]);
    }
    Ok(Instance {
        theorem: TheoremId::Gowers,
        params: params([("k", k as usize), ("l", l as usize), ("m", m), ("d", d)]),
        n,
        objects: points.iter().map(BlockSequence::canonical).collect(),
        problem: Problem::new(points.len(), r, raw),
        filter: None,
    })
}

/// Does every r-coloring of `FIN_k^{[d]}(n)` admit a witness?
pub fn verify_gowers(k: u8, l: u8, m: usize, d: usize, r: u8, n: usize, cfg: &SearchConfig) -> Result<Check> {
    Ok(super::check_instance(&gowers_instance(k, l, m, d, r, n)?, cfg).0)
}

/// `G_d(k, l, m, r)` by linear scan from `n = m`.
pub fn min_gowers(k: u8, l: u8, m: usize, d: usize, r: u8, cfg: &SearchConfig) -> Result<MinOutcome> {
    validate(k, l, m, d)?;
    scan_min(m, |n| gowers_instance(k, l, m, d, r, n), cfg)
}

/// Least `B in FIN_l^{[m]}(n)` whose combined span is monochromatic, with its color.
pub fn find_gowers_witness<F>(
    mut color: F,
    k: u8,
    l: u8,
    m: usize,
    d: usize,
    n: usize,
) -> Result<Option<(BlockSequence, u8)>>
where
    F: FnMut(&BlockSequence) -> Result<u8>,
{
    validate(k, l, m, d)?;
    let mut memo: HashMap<BlockSequence, u8> = HashMap::new();
    'candidates: for b in enumerate_block_sequences(l, n, m)? {
        let mut seen: Option<u8> = None;
        for t in combined_span_d(&b, k, d)? {
            let c = match memo.get(&t) {
                Some(&c) => c,
                None => {
                    let c = color(&t)?;
                    memo.insert(t, c);
                    c
                }
            };
            match seen {
                None => seen = Some(c),
                Some(prev) if prev != c => continue 'candidates,
                _ => {}
            }
        }
        if let Some(c) = seen {
            return Ok(Some((b, c)));
        }
    }
    Ok(None)
}

/// [`find_gowers_witness`] for an oracle, packaged as a certificate.
pub fn gowers_witness_certificate(
    oracle: &Oracle,
    k: u8,
    l: u8,
    m: usize,
    d: usize,
    n: usize,
) -> Result<Option<Certificate>> {
    let found = find_gowers_witness(|t| oracle.color(t), k, l, m, d, n)?;
    Ok(found.map(|(b, c)| {
        let mut p = params([("k", k as usize), ("l", l as usize), ("m", m), ("d", d)]);
        p.insert("r".into(), oracle.colors().into());
        Certificate::new(
            TheoremId::Gowers,
            p,
            Payload::Witness { n, witness: b.canonical(), coloring: oracle.spec().to_string() },
        )
        .with_color(c)
        .verified()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::Builtin;
    use crate::fin::FinElement;

    #[test]
    fn witness_examples() {
        let konst = Oracle::builtin(Builtin::Const(1));
        let (b, c) = find_gowers_witness(|t| konst.color(t), 1, 1, 2, 1, 3).unwrap().unwrap();
        assert_eq!(b, enumerate_block_sequences(1, 3, 2).unwrap()[0]);
        assert_eq!(c, 1);

        let parity = Oracle::builtin(Builtin::SuppParity);
        assert_eq!(find_gowers_witness(|t| parity.color(t), 1, 1, 2, 1, 3).unwrap(), None);

        let (b, _) = find_gowers_witness(|t| parity.color(t), 2, 2, 1, 1, 1).unwrap().unwrap();
        assert_eq!(b.entries(), &[FinElement::new(2, 1, &[2]).unwrap()]);
        assert!(find_gowers_witness(|t| parity.color(t), 3, 2, 1, 1, 1).is_err());
    }

    #[test]
    fn small_minima() {
        for r in 1..=3 {
            assert_eq!(min_gowers(1, 1, 1, 1, r, &SearchConfig::default()).unwrap().value(), Some(1));
        }
        // With one color the answer is the least width holding m blocks.
        assert_eq!(min_gowers(2, 3, 3, 2, 1, &SearchConfig::default()).unwrap().value(), Some(3));
    }
}
