//! Types of elements and block sequences, and the `map(φ, B)` inverse.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fin::{BlockSequence, FinElement};

/// A type of length m over k: values in 1..=k, adjacent values distinct, k attained.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeSeq {
    level: u8,
    values: Vec<u8>,
}

impl TypeSeq {
    pub fn new(level: u8, values: Vec<u8>) -> Result<Self> {
        if level < 1 || values.is_empty() {
            return Err(Error::InvalidParameter("a type needs level >= 1 and length >= 1".into()));
        }
        for (pos, &v) in values.iter().enumerate() {
            if v < 1 || v > level {
                return Err(Error::ValueOutOfRange { position: pos + 1, value: v as u32, level });
            }
        }
        if values.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!("adjacent type values repeat in {values:?}")));
        }
        if !values.contains(&level) {
            return Err(Error::NotAttaining(format!("type {values:?}")));
        }
        Ok(TypeSeq { level, values })
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The type viewed as an element of FIN_k(m).
    pub fn as_element(&self) -> FinElement {
        FinElement::from_raw(self.level, self.values.clone())
    }

    /// `k:(φ1,…,φm)`.
    pub fn canonical(&self) -> String {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("{}:({})", self.level, vals.join(","))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed type {text:?}"));
        let (k, rest) = text.split_once(':').ok_or_else(bad)?;
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let level: u8 = k.parse().map_err(|_| bad())?;
        let values = inner.split(',').map(|v| v.parse::<u8>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        TypeSeq::new(level, values)
    }
}

impl fmt::Debug for TypeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl fmt::Display for TypeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// The type of a d-tuple: one type per entry, laid out consecutively.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TupleType {
    parts: Vec<TypeSeq>,
}

impl TupleType {
    pub fn new(parts: Vec<TypeSeq>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParameter("a tuple type needs at least one part".into()));
        }
        let k = parts[0].level;
        if let Some(p) = parts.iter().find(|p| p.level != k) {
            return Err(Error::LevelMismatch { expected: k, found: p.level });
        }
        Ok(TupleType { parts })
    }

    pub fn parts(&self) -> &[TypeSeq] {
        &self.parts
    }

    pub fn dimension(&self) -> usize {
        self.parts.len()
    }

    /// Total length m.
    pub fn total_len(&self) -> usize {
        self.parts.iter().map(TypeSeq::len).sum()
    }

    /// Start offsets of each part within the m positions.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|p| {
                let o = acc;
                acc += p.len();
                o
            })
            .collect()
    }

    pub fn canonical(&self) -> String {
        self.parts.iter().map(TypeSeq::canonical).collect::<Vec<_>>().join(";")
    }

    pub fn parse(text: &str) -> Result<Self> {
        TupleType::new(text.split(';').map(|s| TypeSeq::parse(s.trim())).collect::<Result<_>>()?)
    }
}

impl fmt::Debug for TupleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// `tp(p)` together with the FIN_1 blocks `B` such that `p = map(tp(p), B)`.
///
/// Runs are maximal groups of consecutive support positions (zeros skipped)
/// carrying the same value.
pub fn type_of(p: &FinElement) -> Result<(TypeSeq, BlockSequence)> {
    if !p.attains() {
        return Err(Error::NotAttaining(p.canonical()));
    }
    let mut values = Vec::new();
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for x in p.support() {
        let v = p.value(x);
        if values.last() == Some(&v) {
            runs.last_mut().unwrap().push(x);
        } else {
            values.push(v);
            runs.push(vec![x]);
        }
    }
    let blocks = runs.iter().map(|r| FinElement::indicator(1, p.width(), r, 1)).collect();
    Ok((TypeSeq { level: p.level(), values }, BlockSequence::from_raw(blocks)))
}

/// `map(φ, B) = sum_i φ(i)·χ(b_i)`.
pub fn map_type(phi: &TypeSeq, b: &BlockSequence) -> Result<FinElement> {
    if phi.len() != b.len() {
        return Err(Error::LengthMismatch { expected: phi.len(), found: b.len() });
    }
    if b.level() != 1 {
        return Err(Error::LevelMismatch { expected: 1, found: b.level() });
    }
    let mut values = vec![0u8; b.width()];
    for (&v, block) in phi.values.iter().zip(b.entries()) {
        for x in block.support() {
            values[x] = v;
        }
    }
    Ok(FinElement::from_raw(phi.level, values))
}

/// Type of a block sequence, with the concatenated FIN_1 blocks.
pub fn type_of_tuple(p: &BlockSequence) -> Result<(TupleType, BlockSequence)> {
    let mut parts = Vec::with_capacity(p.len());
    let mut blocks = Vec::new();
    for e in p.entries() {
        let (t, b) = type_of(e)?;
        parts.push(t);
        blocks.extend(b.into_entries());
    }
    Ok((TupleType { parts }, BlockSequence::from_raw(blocks)))
}

/// Inverse of [`type_of_tuple`].
pub fn map_tuple_type(phi: &TupleType, b: &BlockSequence) -> Result<BlockSequence> {
    if phi.total_len() != b.len() {
        return Err(Error::LengthMismatch { expected: phi.total_len(), found: b.len() });
    }
    let mut out = Vec::with_capacity(phi.dimension());
    let mut rest = b.entries();
    for part in &phi.parts {
        let (head, tail) = rest.split_at(part.len());
        rest = tail;
        out.push(map_type(part, &BlockSequence::from_raw(head.to_vec()))?);
    }
    Ok(BlockSequence::from_raw(out))
}

/// Number of types of length exactly j over k (all j up to `max_len`), index 0 unused.
fn types_by_length(k: u8, max_len: usize) -> Vec<BigUint> {
    // Walks over {1..k} with distinct neighbours, minus those avoiding k.
    let walks = |alphabet: u64, j: usize| -> BigUint {
        if alphabet == 0 {
            return BigUint::zero();
        }
        BigUint::from(alphabet) * num_traits::pow(BigUint::from(alphabet - 1), j - 1)
    };
    let mut out = vec![BigUint::zero(); max_len + 1];
    for (j, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = walks(k as u64, j) - walks(k as u64 - 1, j);
    }
    out
}

/// Number of types of d-tuples over k with total length at most `max_len`.
pub fn count_types(k: u8, max_len: usize, d: usize) -> BigUint {
    if k == 0 || d == 0 {
        return BigUint::zero();
    }
    let t = types_by_length(k, max_len);
    // ways[j] = number of tuple types of the parts placed so far with total length j.
    let mut ways = vec![BigUint::zero(); max_len + 1];
    ways[0] = BigUint::one();
    for _ in 0..d {
        let mut next = vec![BigUint::zero(); max_len + 1];
        for (have, w) in ways.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for j in 1..=max_len - have {
                next[have + j] += w * &t[j];
            }
        }
        ways = next;
    }
    ways.into_iter().fold(BigUint::zero(), |a, b| a + b)
}

/// All types over k of length at most `max_len`, shortest first then lexicographic.
pub fn enumerate_types(k: u8, max_len: usize) -> Vec<TypeSeq> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut cur = vec![0u8; len];
        fn rec(k: u8, pos: usize, cur: &mut Vec<u8>, out: &mut Vec<TypeSeq>) {
            if pos == cur.len() {
                if cur.contains(&k) {
                    out.push(TypeSeq { level: k, values: cur.clone() });
                }
                return;
            }
            for v in 1..=k {
                if pos > 0 && cur[pos - 1] == v {
                    continue;
                }
                cur[pos] = v;
                rec(k, pos + 1, cur, out);
            }
        }
        rec(k, 0, &mut cur, &mut out);
    }
    out
}

/// All tuple types of dimension d over k with total length at most `max_len`.
pub fn enumerate_tuple_types(k: u8, max_len: usize, d: usize) -> Vec<TupleType> {
    let singles = enumerate_types(k, max_len);
    let mut out = Vec::new();
    let mut cur: Vec<TypeSeq> = Vec::with_capacity(d);
    fn rec(singles: &[TypeSeq], d: usize, budget: usize, cur: &mut Vec<TypeSeq>, out: &mut Vec<TupleType>) {
        if cur.len() == d {
            out.push(TupleType { parts: cur.clone() });
            return;
        }
        let reserve = d - cur.len() - 1;
        for t in singles {
            if t.len() + reserve <= budget {
                cur.push(t.clone());
                rec(singles, d, budget - t.len(), cur, out);
                cur.pop();
            }
        }
    }
    rec(&singles, d, max_len, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fin::enumerate_elements;

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    #[test]
    fn type_examples() {
        let (t, b) = type_of(&el(2, &[1, 1, 2, 1])).unwrap();
        assert_eq!(t.values(), &[1, 2, 1]);
        let supports: Vec<Vec<usize>> = b.entries().iter().map(|e| e.support().collect()).collect();
        assert_eq!(supports, vec![vec![0, 1], vec![2], vec![3]]);

        let (t, _) = type_of(&el(2, &[2])).unwrap();
        assert_eq!(t.canonical(), "2:(2)");

        let (t, b) = type_of(&el(1, &[1, 0, 1])).unwrap();
        assert_eq!(t.values(), &[1]);
        assert_eq!(b.len(), 1);

        let pair = BlockSequence::new(vec![el(1, &[1, 0, 0]), el(1, &[0, 0, 1])]).unwrap();
        let (tt, blocks) = type_of_tuple(&pair).unwrap();
        assert_eq!(tt.canonical(), "1:(1);1:(1)");
        assert_eq!(blocks.len(), 2);
        assert!(type_of(&el(2, &[1, 1])).is_err());
    }

    #[test]
    fn map_examples() {
        let phi = TypeSeq::new(2, vec![2, 1]).unwrap();
        let b = BlockSequence::new(vec![el(1, &[1, 1, 0]), el(1, &[0, 0, 1])]).unwrap();
        assert_eq!(map_type(&phi, &b).unwrap().values(), &[2, 2, 1]);
        let phi = TypeSeq::new(2, vec![2]).unwrap();
        assert_eq!(map_type(&phi, &BlockSequence::new(vec![el(1, &[1])]).unwrap()).unwrap().values(), &[2]);
        assert!(map_type(&phi, &b).is_err());
        assert!(TypeSeq::new(2, vec![2, 2]).is_err());
        assert!(TypeSeq::new(2, vec![1]).is_err());
    }

    #[test]
    fn map_inverts_type_exhaustively() {
        for k in 1..=3 {
            for p in enumerate_elements(k, 4, true).unwrap() {
                let (t, b) = type_of(&p).unwrap();
                assert_eq!(map_type(&t, &b).unwrap(), p);
                assert_eq!(TypeSeq::parse(&t.canonical()).unwrap(), t);
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_types(1, 2, 1), BigUint::from(1u32));
        assert_eq!(count_types(2, 2, 1), BigUint::from(3u32));
        assert_eq!(count_types(2, 2, 2), BigUint::from(1u32));
    }

    #[test]
    fn count_matches_enumeration() {
        for k in 1..=3u8 {
            for m in 1..=5 {
                for d in 1..=3 {
                    let listed = enumerate_tuple_types(k, m, d).len();
                    assert_eq!(count_types(k, m, d), BigUint::from(listed), "k={k} m={m} d={d}");
                }
            }
        }
    }
}
