//! Size-insensitive Ramsey statements for tuples of bounded-size sets.
//!
//! A point is `(A_1, ..., A_m)` with `A_i ⊆ [N]` and `|A_i| <= k_i`. A witness
//! is `(B_1, ..., B_m)` with `|B_i| = l_i` such that the color of a point
//! inside it (`A_i ⊆ B_i`) depends only on the sizes `(|A_1|, ..., |A_m|)`.
//! For `d > 1` points are d-tuples of such tuples with nonempty, block-ordered
//! supports, and the color may depend on the d size vectors.

use std::collections::BTreeMap;

use super::{scan_min, Check, Instance, MinOutcome, Problem, SearchConfig};
use crate::cert::TheoremId;
use crate::coloring::Colorable;
use crate::error::{Error, Result};

/// `d` tuples of `m` sets each; positions are 1-based and increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetTuple {
    pub parts: Vec<Vec<Vec<usize>>>,
}

impl SetTuple {
    /// Sizes `|A_i|` of every part.
    pub fn sizes(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|p| p.iter().map(Vec::len).collect()).collect()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed set tuple {text:?}"));
        let parts = text
            .split(';')
            .map(|part| {
                part.split('|')
                    .map(|set| {
                        let inner = set.trim().strip_prefix('{').and_then(|s| s.strip_suffix('}')).ok_or_else(bad)?;
                        if inner.trim().is_empty() {
                            return Ok(Vec::new());
                        }
                        inner.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect()
                    })
                    .collect::<Result<Vec<Vec<usize>>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SetTuple { parts })
    }
}

impl Colorable for SetTuple {
    fn canonical(&self) -> String {
        self.parts
            .iter()
            .map(|p| {
                p.iter()
                    .map(|s| format!("{{{}}}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    fn cardinality(&self) -> Option<usize> {
        Some(self.parts.iter().flatten().map(Vec::len).sum())
    }

    fn support_size(&self) -> Option<usize> {
        self.cardinality()
    }

    fn max_position(&self) -> Option<usize> {
        self.parts.iter().flatten().flatten().max().copied()
    }
}

/// Parameters `m`, `k_1..k_m`, `l_1..l_m` and `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeParams {
    pub k: Vec<usize>,
    pub l: Vec<usize>,
    pub d: usize,
}

impl SizeParams {
    pub fn new(k: Vec<usize>, l: Vec<usize>, d: usize) -> Result<Self> {
        if k.is_empty() || k.len() != l.len() {
            return Err(Error::InvalidParameter("k and l must be nonempty and of equal length".into()));
        }
        if k.iter().zip(&l).any(|(&ki, &li)| ki > li) {
            return Err(Error::InvalidParameter("need k_i <= l_i".into()));
        }
        if d < 1 || d > k.len() {
            return Err(Error::InvalidParameter(format!("need 1 <= d <= m (d={d}, m={})", k.len())));
        }
        Ok(SizeParams { k, l, d })
    }

    pub fn m(&self) -> usize {
        self.k.len()
    }

    fn record(&self) -> BTreeMap<String, serde_json::Value> {
        let mut p = BTreeMap::new();
        p.insert("m".into(), self.m().into());
        p.insert("k".into(), self.k.clone().into());
        p.insert("l".into(), self.l.clone().into());
        p.insert("d".into(), self.d.into());
        p
    }
}

/// Subsets of `set` of size exactly `j`, lexicographic.
fn combinations(set: &[usize], j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(j);
    fn rec(set: &[usize], j: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..set.len() {
            if set.len() - i < j - cur.len() {
                break;
            }
            cur.push(set[i]);
            rec(set, j, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(set, j, 0, &mut cur, &mut out);
    out
}

fn upto(set: &[usize], k: usize) -> Vec<Vec<usize>> {
    (0..=k.min(set.len())).flat_map(|j| combinations(set, j)).collect()
}

/// Every `(A_1..A_m)` with `A_i ⊆ sets[i]`, `|A_i| <= k_i`.
fn single_tuples(sets: &[Vec<usize>], k: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for (set, &ki) in sets.iter().zip(k) {
        let choices = upto(set, ki);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut p = prefix.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    out
}

fn support(t: &[Vec<usize>]) -> (usize, usize) {
    let idx: Vec<usize> = t.iter().enumerate().filter(|(_, s)| !s.is_empty()).map(|(i, _)| i).collect();
    (idx[0], *idx.last().unwrap())
}

/// All points whose sets lie in `sets`.
fn points_within(sets: &[Vec<usize>], p: &SizeParams) -> Vec<SetTuple> {
    let singles = single_tuples(sets, &p.k);
    if p.d == 1 {
        return singles.into_iter().map(|t| SetTuple { parts: vec![t] }).collect();
    }
    let singles: Vec<_> = singles.into_iter().filter(|t| t.iter().any(|s| !s.is_empty())).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Vec<Vec<usize>>> = Vec::with_capacity(p.d);
    fn rec(singles: &[Vec<Vec<usize>>], d: usize, cur: &mut Vec<Vec<Vec<usize>>>, out: &mut Vec<SetTuple>) {
        if cur.len() == d {
            out.push(SetTuple { parts: cur.clone() });
            return;
        }
        let lo = cur.last().map(|t| support(t).1 + 1).unwrap_or(0);
        for t in singles {
            if support(t).0 >= lo {
                cur.push(t.clone());
                rec(singles, d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&singles, p.d, &mut cur, &mut out);
    out
}

/// Candidate witnesses in lexicographic order.
fn witnesses(p: &SizeParams, n: usize) -> Vec<Vec<Vec<usize>>> {
    let ground: Vec<usize> = (1..=n).collect();
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for &li in &p.l {
        let choices = combinations(&ground, li);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut q = prefix.clone();
                    q.push(c.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// Points inside a witness grouped by size vectors.
fn size_classes(b: &[Vec<usize>], p: &SizeParams) -> BTreeMap<Vec<Vec<usize>>, Vec<SetTuple>> {
    let mut classes: BTreeMap<Vec<Vec<usize>>, Vec<SetTuple>> = BTreeMap::new();
    for t in points_within(b, p) {
        classes.entry(t.sizes()).or_default().push(t);
    }
    classes
}

pub fn size_instance(p: &SizeParams, r: u8, n: usize) -> Result<Instance> {
    let ground: Vec<usize> = (1..=n).collect();
    let mut points = points_within(&vec![ground; p.m()], p);
    points.sort_by_cached_key(|t| (t.max_position().unwrap_or(0), t.clone()));
    let index = super::index_of(&points);
    let raw: Vec<Vec<Vec<u32>>> = witnesses(p, n)
        .iter()
        .map(|b| size_classes(b, p).into_values().map(|c| c.iter().map(|t| index[t]).collect::<Vec<u32>>()).collect::<Vec<_>>())
        .collect();
    Ok(Instance {
        theorem: TheoremId::SizeInsens,
        params: p.record(),
        n,
        objects: points.iter().map(Colorable::canonical).collect(),
        problem: Problem::new(points.len(), r, raw),
        filter: None,
    })
}

pub fn verify_size_insensitive(p: &SizeParams, r: u8, n: usize, cfg: &SearchConfig) -> Result<Check> {
    Ok(super::check_instance(&size_instance(p, r, n)?, cfg).0)
}

/// Least `N` by linear scan from `max l_i`.
pub fn min_size_insensitive(p: &SizeParams, r: u8, cfg: &SearchConfig) -> Result<MinOutcome> {
    let lower = p.l.iter().copied().max().unwrap_or(1).max(1);
    scan_min(lower, |n| size_instance(p, r, n), cfg)
}

/// Least witness in `[N]`, with the color of each size class.
pub fn find_size_insensitive<F>(
    mut color: F,
    p: &SizeParams,
    n: usize,
) -> Result<Option<(Vec<Vec<usize>>, Vec<(Vec<Vec<usize>>, u8)>)>>
where
    F: FnMut(&SetTuple) -> Result<u8>,
{
    let mut memo: std::collections::HashMap<SetTuple, u8> = Default::default();
    'candidates: for b in witnesses(p, n) {
        let mut colors = Vec::new();
        for (sizes, class) in size_classes(&b, p) {
            let mut seen = None;
            for t in class {
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
            colors.push((sizes, seen.expect("size classes are nonempty")));
        }
        return Ok(Some((b, colors)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_of_minimum_example() {
        let p = SizeParams::new(vec![1], vec![2], 1).unwrap();
        let parity = |t: &SetTuple| -> Result<u8> { Ok(1 + (t.parts[0][0].first().copied().unwrap_or(0) % 2) as u8) };
        let (b, _) = find_size_insensitive(parity, &p, 3).unwrap().unwrap();
        assert_eq!(b, vec![vec![1, 3]]);
        assert!(find_size_insensitive(parity, &p, 2).unwrap().is_none());
    }

    #[test]
    fn canonical_round_trip() {
        let t = SetTuple { parts: vec![vec![vec![1, 3], vec![]], vec![vec![], vec![4]]] };
        assert_eq!(t.canonical(), "{1,3}|{};{}|{4}");
        assert_eq!(SetTuple::parse(&t.canonical()).unwrap(), t);
    }

    #[test]
    fn one_set_is_pigeonhole() {
        // Singletons only: the witness needs l of them in one color.
        let cfg = SearchConfig::default();
        for r in 1..=3u8 {
            let p = SizeParams::new(vec![1], vec![2], 1).unwrap();
            assert_eq!(min_size_insensitive(&p, r, &cfg).unwrap().value(), Some(r as usize + 1));
        }
    }

    #[test]
    fn block_ordered_pairs() {
        let p = SizeParams::new(vec![1, 1], vec![1, 1], 2).unwrap();
        let pts = points_within(&[vec![1, 2], vec![1, 2]], &p);
        // (A_1, {}) then ({}, A_2): 2 * 2 choices.
        assert_eq!(pts.len(), 4);
    }
}
