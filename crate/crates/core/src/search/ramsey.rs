//! Classical Ramsey numbers `R(k, l, r)` with isomorph rejection.

use super::{scan_min, Check, Instance, MinOutcome, PrefixFilter, Problem, SearchConfig};
use crate::cert::{params, TheoremId};
use crate::coloring::{Colorable, KSet};
use crate::error::{Error, Result};

/// Largest vertex count whose relabelings are tried by the prefix filter.
const MAX_RELABEL: usize = 6;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Colex rank of a sorted 0-based subset.
fn colex_rank(set: &[usize]) -> usize {
    set.iter().enumerate().map(|(i, &a)| binom(a, i + 1)).sum()
}

/// All k-subsets of `0..n` in colex order.
pub(crate) fn colex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            let mut s = cur.clone();
            s.reverse();
            out.push(s);
            return;
        }
        // Choose the largest element first, descending.
        let hi = cur.last().copied().unwrap_or(n);
        for a in (k - cur.len() - 1)..hi {
            cur.push(a);
            rec(n, k, cur, out);
            cur.pop();
        }
    }
    rec(n, k, &mut cur, &mut out);
    out.sort_by_key(|s| colex_rank(s));
    out
}

/// Rejects a coloring of the k-subsets of `0..v` when relabeling the
/// vertices gives a lexicographically smaller normalized coloring.
struct Relabel {
    k: usize,
    /// Per checkpoint `v`: the permuted rank tables, one per permutation of `0..v`.
    tables: Vec<(usize, Vec<Vec<usize>>)>,
}

impl Relabel {
    fn new(n: usize, k: usize) -> Self {
        let subsets = colex_subsets(n.min(MAX_RELABEL), k);
        let mut tables = Vec::new();
        for v in k..=n.min(MAX_RELABEL) {
            let count = binom(v, k);
            let mut perms = Vec::new();
            let mut perm: Vec<usize> = (0..v).collect();
            permutations(&mut perm, 0, &mut |p| {
                if p.iter().enumerate().all(|(i, &x)| i == x) {
                    return;
                }
                let table = subsets[..count]
                    .iter()
                    .map(|s| {
                        let mut img: Vec<usize> = s.iter().map(|&x| p[x]).collect();
                        img.sort_unstable();
                        colex_rank(&img)
                    })
                    .collect();
                perms.push(table);
            });
            tables.push((count, perms));
        }
        Relabel { k, tables }
    }
}

fn permutations(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, f);
        p.swap(i, j);
    }
}

impl PrefixFilter for Relabel {
    fn checkpoints(&self) -> Vec<usize> {
        self.tables.iter().map(|(c, _)| *c).collect()
    }

    fn accept(&self, prefix: &[u8]) -> bool {
        let Some((_, perms)) = self.tables.iter().find(|(c, _)| *c == prefix.len()) else {
            return true;
        };
        debug_assert!(self.k >= 1);
        let mut relabel = [u8::MAX; 16];
        for table in perms {
            relabel.fill(u8::MAX);
            let mut next = 0u8;
            for (pos, &src) in table.iter().enumerate() {
                let raw = prefix[src];
                if relabel[raw as usize] == u8::MAX {
                    relabel[raw as usize] = next;
                    next += 1;
                }
                let c = relabel[raw as usize];
                if c != prefix[pos] {
                    if c < prefix[pos] {
                        return false;
                    }
                    break;
                }
            }
        }
        true
    }
}

/// Points `N^{[k]}` in colex order; one single-class constraint per l-subset.
pub fn ramsey_instance(k: usize, l: usize, r: u8, n: usize, isomorph_rejection: bool) -> Result<Instance> {
    if k < 1 || k > l {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= l (k={k}, l={l})")));
    }
    let points = colex_subsets(n, k);
    let mut raw = Vec::new();
    for x in colex_subsets(n, l) {
        let class = colex_subsets(l, k)
            .iter()
            .map(|sub| {
                let img: Vec<usize> = sub.iter().map(|&i| x[i]).collect();
                colex_rank(&img) as u32
            })
            .collect();
        raw.push(vec![class]);
    }
    let filter: Option<Box<dyn PrefixFilter + Send>> =
        if isomorph_rejection && n >= k { Some(Box::new(Relabel::new(n, k))) } else { None };
    Ok(Instance {
        theorem: TheoremId::Ramsey,
        params: params([("k", k), ("l", l)]),
        n,
        objects: points.iter().map(|s| KSet(s.iter().map(|x| x + 1).collect()).canonical()).collect(),
        problem: Problem::new(points.len(), r, raw),
        filter,
    })
}

pub fn verify_ramsey(k: usize, l: usize, r: u8, n: usize, cfg: &SearchConfig) -> Result<Check> {
    Ok(super::check_instance(&ramsey_instance(k, l, r, n, true)?, cfg).0)
}

/// `R(k, l, r)` by linear scan from `N = l`.
pub fn min_classical_ramsey(k: usize, l: usize, r: u8, cfg: &SearchConfig) -> Result<MinOutcome> {
    if k < 1 || k > l {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= l (k={k}, l={l})")));
    }
    scan_min(l, |n| ramsey_instance(k, l, r, n, true), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{solve, Verdict};

    #[test]
    fn colex_is_ranked() {
        let subs = colex_subsets(6, 3);
        assert_eq!(subs.len(), 20);
        for (i, s) in subs.iter().enumerate() {
            assert_eq!(colex_rank(s), i);
        }
        assert_eq!(subs[0], vec![0, 1, 2]);
        assert_eq!(subs[1], vec![0, 1, 3]);
    }

    #[test]
    fn pigeonhole_values() {
        let cfg = SearchConfig::default();
        for l in 1..=3 {
            for r in 1..=3u8 {
                assert_eq!(min_classical_ramsey(1, l, r, &cfg).unwrap().value(), Some(r as usize * (l - 1) + 1));
            }
        }
        assert_eq!(min_classical_ramsey(2, 2, 3, &cfg).unwrap().value(), Some(2));
    }

    #[test]
    fn rejection_keeps_verdicts() {
        for n in 3..=6 {
            let with = ramsey_instance(2, 3, 2, n, true).unwrap();
            let without = ramsey_instance(2, 3, 2, n, false).unwrap();
            let cfg = SearchConfig::default();
            let a = solve(&with.problem, with.filter.as_deref().map(|f| f as &dyn PrefixFilter), &cfg).verdict;
            let b = solve(&without.problem, None, &cfg).verdict;
            assert_eq!(a, b, "n={n}");
            assert_eq!(matches!(a, Verdict::Holds), n >= 6);
        }
    }
}
