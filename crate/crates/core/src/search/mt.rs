//! Finite Milliken-Taylor: colorings of `FIN_1^{[d]}(A)` with `|A| = n`.
//!
//! Subsets are bitmasks here, independently of the FIN_k span code, so the
//! results cross-check the combined-span searches at `k = l = 1`.

use super::{scan_min, Check, Instance, MinOutcome, Problem, SearchConfig};
use crate::cert::{params, TheoremId};
use crate::error::{Error, Result};

/// Block-ordered tuples of nonempty subsets of `0..n`, as bitmasks.
fn block_tuples(n: usize, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(n: usize, d: usize, lo: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        // The next set starts at `lo` or later; choose its minimum, then the rest.
        for min in lo..n {
            let rest_bits = n - min - 1;
            for tail in 0u64..(1u64 << rest_bits) {
                let set = (1u64 << min) | (tail << (min + 1));
                let top = 63 - set.leading_zeros() as usize;
                cur.push(set);
                rec(n, d, top + 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, d, 0, &mut cur, &mut out);
    out
}

fn top_bit(tuple: &[u64]) -> usize {
    tuple.last().map(|s| 63 - s.leading_zeros() as usize).unwrap_or(0)
}

fn canonical(tuple: &[u64], n: usize) -> String {
    tuple
        .iter()
        .map(|&s| {
            let vals: Vec<&str> = (0..n).map(|i| if s >> i & 1 == 1 { "1" } else { "0" }).collect();
            format!("1:{n}:[{}]", vals.join(","))
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Points `FIN_1^{[d]}(n)`, one constraint per `B in FIN_1^{[m]}(n)` whose
/// class is `FIN_1^{[d]}(B)`.
pub fn mt_instance(d: usize, m: usize, r: u8, n: usize) -> Result<Instance> {
    if d < 1 || d > m {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= m (d={d}, m={m})")));
    }
    if n > 20 {
        return Err(Error::InvalidParameter("Milliken-Taylor search supports n <= 20".into()));
    }
    let mut points = block_tuples(n, d);
    points.sort_by_key(|t| (top_bit(t), t.clone()));
    let index: std::collections::HashMap<Vec<u64>, u32> =
        points.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
    // Index tuples over the m blocks of B, reused for every B.
    let patterns = block_tuples(m, d);
    let mut raw = Vec::new();
    for b in block_tuples(n, m) {
        let class = patterns
            .iter()
            .map(|pat| {
                let tuple: Vec<u64> = pat
                    .iter()
                    .map(|&sel| (0..m).filter(|j| sel >> j & 1 == 1).fold(0u64, |acc, j| acc | b[j]))
                    .collect();
                index[&tuple]
            })
            .collect();
        raw.push(vec![class]);
    }
    Ok(Instance {
        theorem: TheoremId::Mt,
        params: params([("d", d), ("m", m)]),
        n,
        objects: points.iter().map(|t| canonical(t, n)).collect(),
        problem: Problem::new(points.len(), r, raw),
        filter: None,
    })
}

/// Checks one `n`.
pub fn verify_mt(d: usize, m: usize, r: u8, n: usize, cfg: &SearchConfig) -> Result<Check> {
    Ok(super::check_instance(&mt_instance(d, m, r, n)?, cfg).0)
}

/// `MT_d(m, r)` by linear scan from `n = m`.
pub fn min_milliken_taylor(d: usize, m: usize, r: u8, cfg: &SearchConfig) -> Result<MinOutcome> {
    if d < 1 || d > m {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= m (d={d}, m={m})")));
    }
    scan_min(m, |n| mt_instance(d, m, r, n), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fin::enumerate_block_sequences;

    #[test]
    fn tuple_counts_match_block_sequences() {
        for n in 1..=5 {
            for d in 1..=3 {
                assert_eq!(block_tuples(n, d).len(), enumerate_block_sequences(1, n, d).unwrap().len());
            }
        }
    }

    #[test]
    fn small_values() {
        let cfg = SearchConfig::default();
        for r in 1..=3 {
            assert_eq!(min_milliken_taylor(1, 1, r, &cfg).unwrap().value(), Some(1));
        }
        assert!(matches!(verify_mt(1, 2, 2, 3, &cfg).unwrap(), Check::Fails(_)));
    }
}
