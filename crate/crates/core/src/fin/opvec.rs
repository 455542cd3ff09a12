use std::fmt;

use serde::{Deserialize, Serialize};

use super::element::FinElement;
use crate::error::{Error, Result};

/// Which index product a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpKind {
    /// P_k: coordinates `i(1..=k)` with `i(j)` in `0..=j`.
    Full,
    /// P_{k+1}^l: coordinates `i(k+1..=l)` with `i(j)` in `1..=j`. Empty when `l = k`.
    Upper { lower: u8 },
}

/// An index vector selecting the composite `T_{i(1)} o ... o T_{i(top)}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpVector {
    kind: OpKind,
    coords: Vec<u8>,
}

impl OpVector {
    pub fn full(coords: Vec<u8>) -> Result<Self> {
        for (idx, &c) in coords.iter().enumerate() {
            let j = idx as u8 + 1;
            if c > j {
                return Err(Error::OperationOutOfRange { index: c, level: j });
            }
        }
        Ok(OpVector { kind: OpKind::Full, coords })
    }

    pub fn zero(k: u8) -> Self {
        OpVector { kind: OpKind::Full, coords: vec![0; k as usize] }
    }

    /// A vector of P_{k+1}^l given by the coordinates for levels `k+1..=l`.
    pub fn upper(lower: u8, coords: Vec<u8>) -> Result<Self> {
        for (idx, &c) in coords.iter().enumerate() {
            let j = lower + 1 + idx as u8;
            if c < 1 || c > j {
                return Err(Error::OperationOutOfRange { index: c, level: j });
            }
        }
        Ok(OpVector { kind: OpKind::Upper { lower }, coords })
    }

    /// The identity element of P_{k+1}^k.
    pub fn upper_identity(k: u8) -> Self {
        OpVector { kind: OpKind::Upper { lower: k }, coords: Vec::new() }
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    /// Level of the elements this vector applies to.
    pub fn input_level(&self) -> u8 {
        match self.kind {
            OpKind::Full => self.coords.len() as u8,
            OpKind::Upper { lower } => lower + self.coords.len() as u8,
        }
    }

    /// Level of the results: the zero count for full vectors, `k` for upper ones.
    pub fn output_level(&self) -> u8 {
        match self.kind {
            OpKind::Full => self.zero_count() as u8,
            OpKind::Upper { lower } => lower,
        }
    }

    pub fn zero_count(&self) -> usize {
        self.coords.iter().filter(|&&c| c == 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.kind == OpKind::Full && self.coords.iter().all(|&c| c == 0)
    }

    /// Applies the composite to `p`, innermost coordinate first.
    pub fn apply(&self, p: &FinElement) -> Result<FinElement> {
        let expected = self.input_level();
        if p.level() != expected {
            return Err(Error::LevelMismatch { expected, found: p.level() });
        }
        let mut out = p.clone();
        for &c in self.coords.iter().rev() {
            out = out.tetris(c)?;
        }
        Ok(out)
    }

    /// The induced map on values `0..=input_level`.
    pub fn value_map(&self) -> ValueMap {
        let top = self.input_level();
        let mut table: Vec<u8> = (0..=top).collect();
        for &c in self.coords.iter().rev() {
            if c > 0 {
                for v in table.iter_mut() {
                    if *v >= c {
                        *v -= 1;
                    }
                }
            }
        }
        ValueMap { table }
    }

    /// Zeros moved to the front, nonzero coordinates kept in order. Only
    /// meaningful for full vectors; the composite is unchanged.
    pub fn normalize(&self) -> OpVector {
        let mut coords: Vec<u8> = self.coords.iter().copied().filter(|&c| c == 0).collect();
        coords.extend(self.coords.iter().copied().filter(|&c| c != 0));
        OpVector { kind: self.kind, coords }
    }

    /// Concatenation of a full vector in P_k and an upper vector in P_{k+1}^l.
    pub fn concat(full: &OpVector, upper: &OpVector) -> Result<OpVector> {
        match (full.kind, upper.kind) {
            (OpKind::Full, OpKind::Upper { lower }) if lower as usize == full.coords.len() => {
                let mut coords = full.coords.clone();
                coords.extend_from_slice(&upper.coords);
                Ok(OpVector { kind: OpKind::Full, coords })
            }
            _ => Err(Error::InvalidParameter("concat needs a P_k vector and a P_{k+1}^l vector".into())),
        }
    }

    /// Canonical text: `(i1,i2,...)` for full vectors, `^k(i_{k+1},...)` for upper ones.
    pub fn canonical(&self) -> String {
        let body: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        match self.kind {
            OpKind::Full => format!("({})", body.join(",")),
            OpKind::Upper { lower } => format!("^{}({})", lower, body.join(",")),
        }
    }
}

impl fmt::Debug for OpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// `(i+1)`: prepend a zero and shift every nonzero coordinate up by one.
/// Satisfies `T_i o T_1 = T_1 o T_{i+1}` on FIN_l.
pub fn vec_plus_one(v: &OpVector) -> Result<OpVector> {
    if v.kind != OpKind::Full || v.coords.is_empty() {
        return Err(Error::InvalidParameter("vec_plus_one expects a full vector of level >= 1".into()));
    }
    let mut coords = Vec::with_capacity(v.coords.len() + 1);
    coords.push(0);
    coords.extend(v.coords.iter().map(|&c| if c == 0 { 0 } else { c + 1 }));
    Ok(OpVector { kind: OpKind::Full, coords })
}

/// Inverse of [`vec_plus_one`]; `None` when `v` is not of that form.
pub fn vec_minus_one(v: &OpVector) -> Option<OpVector> {
    if v.kind != OpKind::Full || v.coords.len() < 2 || v.coords[0] != 0 {
        return None;
    }
    let mut coords = Vec::with_capacity(v.coords.len() - 1);
    for &c in &v.coords[1..] {
        match c {
            0 => coords.push(0),
            1 => return None,
            c => coords.push(c - 1),
        }
    }
    Some(OpVector { kind: OpKind::Full, coords })
}

/// Every vector of P_k, lexicographic.
pub fn all_full(k: u8) -> Vec<OpVector> {
    product((1..=k).map(|j| (0..=j).collect()).collect())
        .into_iter()
        .map(|coords| OpVector { kind: OpKind::Full, coords })
        .collect()
}

/// Every vector of P_{k+1}^l, lexicographic; `[identity]` when `l = k`.
pub fn all_upper(k: u8, l: u8) -> Vec<OpVector> {
    product((k + 1..=l).map(|j| (1..=j).collect()).collect())
        .into_iter()
        .map(|coords| OpVector { kind: OpKind::Upper { lower: k }, coords })
        .collect()
}

fn product(ranges: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for range in ranges {
        let mut next = Vec::with_capacity(out.len() * range.len());
        for prefix in &out {
            for &c in &range {
                let mut v = prefix.clone();
                v.push(c);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// A nondecreasing unit-step surjection `{0..=top} -> {0..=out}` fixing 0.
///
/// Every composite of tetris operations acts on values through such a map,
/// and two index vectors agree on every element iff their maps agree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ValueMap {
    table: Vec<u8>,
}

impl ValueMap {
    pub fn identity(top: u8) -> Self {
        ValueMap { table: (0..=top).collect() }
    }

    /// Map whose flat steps (values `u-1` and `u` merged) are exactly `flats`.
    pub fn from_flats(top: u8, flats: &[u8]) -> Self {
        let mut table = Vec::with_capacity(top as usize + 1);
        let mut v = 0u8;
        table.push(0);
        for u in 1..=top {
            if !flats.contains(&u) {
                v += 1;
            }
            table.push(v);
        }
        ValueMap { table }
    }

    pub fn input_level(&self) -> u8 {
        (self.table.len() - 1) as u8
    }

    pub fn output_level(&self) -> u8 {
        *self.table.last().unwrap()
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.output_level() == self.input_level()
    }

    /// Steps `u` in `1..=top` where `map(u) == map(u-1)`.
    pub fn flats(&self) -> Vec<u8> {
        (1..self.table.len()).filter(|&u| self.table[u] == self.table[u - 1]).map(|u| u as u8).collect()
    }

    pub fn apply(&self, p: &FinElement) -> FinElement {
        let values = p.values().iter().map(|&v| self.table[v as usize]).collect();
        FinElement::from_raw(self.output_level(), values)
    }

    /// `T_1 o self = shifted o T_1`, with `shifted(w) = max(self(w+1) - 1, 0)`.
    pub fn t1_shift(&self) -> ValueMap {
        let table = (1..self.table.len()).map(|w| self.table[w].saturating_sub(1)).collect();
        ValueMap { table }
    }

    /// The canonical zeros-first full vector realising this map: flat steps
    /// are consumed largest first, starting from the innermost coordinate.
    pub fn to_vector(&self) -> OpVector {
        let top = self.input_level() as usize;
        let mut flats = self.flats();
        flats.sort_unstable_by(|a, b| b.cmp(a));
        let mut coords = vec![0u8; top];
        for (idx, &u) in flats.iter().enumerate() {
            coords[top - 1 - idx] = u;
        }
        OpVector { kind: OpKind::Full, coords }
    }

    /// Splits the map into `(t, i)` with `t` in P_k and `i` in P_{k+1}^l so
    /// that `T_t o T_i` realises it. Needs `output_level() <= k <= input_level()`.
    pub fn split(&self, k: u8) -> Result<(OpVector, OpVector)> {
        let l = self.input_level();
        if k > l || self.output_level() > k {
            return Err(Error::InvalidParameter(format!(
                "cannot split a map {{0..{l}}} -> {{0..{}}} at level {k}",
                self.output_level()
            )));
        }
        let full = self.to_vector();
        let t = OpVector { kind: OpKind::Full, coords: full.coords[..k as usize].to_vec() };
        let i = OpVector { kind: OpKind::Upper { lower: k }, coords: full.coords[k as usize..].to_vec() };
        debug_assert!(i.coords.iter().all(|&c| c > 0));
        Ok((t, i))
    }

    /// Every map from `{0..=top}` whose output level is at most `max_out`,
    /// ordered by output level descending then flat set.
    pub fn all_onto_at_most(top: u8, max_out: u8) -> Vec<ValueMap> {
        let mut maps = Vec::new();
        for mask in 0u32..(1u32 << top) {
            let flats: Vec<u8> = (1..=top).filter(|u| mask & (1 << (u - 1)) != 0).collect();
            let m = ValueMap::from_flats(top, &flats);
            if m.output_level() <= max_out {
                maps.push(m);
            }
        }
        maps.sort_by(|a, b| b.output_level().cmp(&a.output_level()).then_with(|| a.cmp(b)));
        maps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fin::element::enumerate_elements;

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    #[test]
    fn compose_examples() {
        let v = OpVector::full(vec![1, 0]).unwrap();
        assert_eq!(v.apply(&el(2, &[2, 0, 1])).unwrap().values(), &[1, 0, 0]);
        let v = OpVector::full(vec![1, 1]).unwrap();
        assert!(v.apply(&el(2, &[2, 0, 0])).unwrap().is_zero());
        let p = el(3, &[3, 1, 0, 2]);
        assert_eq!(OpVector::upper_identity(3).apply(&p).unwrap(), p);
        assert!(OpVector::full(vec![2]).is_err());
        assert!(OpVector::upper(1, vec![0]).is_err());
        assert!(OpVector::zero(2).apply(&el(3, &[3])).is_err());
    }

    #[test]
    fn plus_one_examples() {
        let v = vec_plus_one(&OpVector::full(vec![0]).unwrap()).unwrap();
        assert_eq!(v.coords(), &[0, 0]);
        let v = vec_plus_one(&OpVector::full(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(v.coords(), &[0, 2, 0]);
        assert_eq!(vec_minus_one(&v).unwrap().coords(), &[1, 0]);
        assert!(vec_minus_one(&OpVector::full(vec![0, 1]).unwrap()).is_none());
    }

    #[test]
    fn plus_one_commutes_with_t1_exhaustively() {
        for l in 2..=4u8 {
            for v in all_full(l - 1) {
                let w = vec_plus_one(&v).unwrap();
                for p in enumerate_elements(l, 3, false).unwrap() {
                    let lhs = v.apply(&p.tetris(1).unwrap()).unwrap();
                    let rhs = w.apply(&p).unwrap().tetris(1).unwrap();
                    assert_eq!(lhs.values(), rhs.values(), "v={v:?} p={p}");
                }
            }
        }
    }

    #[test]
    fn normalization_preserves_composite() {
        for k in 1..=4u8 {
            for v in all_full(k) {
                let n = v.normalize();
                assert_eq!(v.value_map(), n.value_map(), "{v:?}");
                let canon = v.value_map().to_vector();
                assert_eq!(canon.value_map(), v.value_map());
            }
        }
    }

    #[test]
    fn annihilation_of_zero_free_vectors() {
        for k in 1..=4u8 {
            for v in all_full(k).into_iter().filter(|v| v.zero_count() == 0) {
                for p in enumerate_elements(k, 3, true).unwrap() {
                    assert!(v.apply(&p).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn distinct_maps_of_pk_are_flat_subsets() {
        for k in 1..=4u8 {
            let mut maps: Vec<_> = all_full(k).iter().map(|v| v.value_map()).collect();
            maps.sort();
            maps.dedup();
            assert_eq!(maps.len(), 1 << k);
        }
    }

    #[test]
    fn split_round_trip() {
        for l in 1..=4u8 {
            for k in 0..=l {
                for t in all_full(k) {
                    for i in all_upper(k, l) {
                        let joint = OpVector::concat(&t, &i).unwrap();
                        let map = joint.value_map();
                        let (t2, i2) = map.split(k).unwrap();
                        let again = OpVector::concat(&t2, &i2).unwrap().value_map();
                        assert_eq!(again, map);
                    }
                }
            }
        }
    }

    #[test]
    fn upper_enumeration_sizes() {
        assert_eq!(all_upper(2, 2).len(), 1);
        assert_eq!(all_upper(1, 3).len(), 6);
        assert_eq!(all_full(3).len(), 24);
    }
}
