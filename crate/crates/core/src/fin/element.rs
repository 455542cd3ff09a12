use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A member of FIN_k(n): a function {1..n} -> {0..k}.
///
/// Positions are stored zero-based; the canonical text form and all
/// user-facing messages are one-based.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinElement {
    level: u8,
    values: Vec<u8>,
}

impl FinElement {
    /// Validating constructor.
    pub fn new(level: u8, width: usize, values: &[u32]) -> Result<Self> {
        if level < 1 {
            return Err(Error::InvalidParameter("level k must be at least 1".into()));
        }
        if width < 1 {
            return Err(Error::InvalidParameter("width n must be at least 1".into()));
        }
        if values.len() != width {
            return Err(Error::LengthMismatch { expected: width, found: values.len() });
        }
        let mut out = Vec::with_capacity(width);
        for (position, &value) in values.iter().enumerate() {
            if value > level as u32 {
                return Err(Error::ValueOutOfRange { position: position + 1, value, level });
            }
            out.push(value as u8);
        }
        Ok(FinElement { level, values: out })
    }

    /// Builds an element without range checks. Values must lie in `0..=level`.
    pub(crate) fn from_raw(level: u8, values: Vec<u8>) -> Self {
        debug_assert!(values.iter().all(|&v| v <= level));
        FinElement { level, values }
    }

    pub fn zero(level: u8, width: usize) -> Self {
        FinElement { level, values: vec![0; width] }
    }

    /// `value * chi(set)` for a set of zero-based positions.
    pub fn indicator(level: u8, width: usize, positions: &[usize], value: u8) -> Self {
        let mut values = vec![0; width];
        for &p in positions {
            values[p] = value;
        }
        FinElement { level, values }
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn value(&self, position: usize) -> u8 {
        self.values[position]
    }

    /// Zero-based positions carrying a nonzero value.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, _)| i)
    }

    pub fn support_size(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }

    pub fn min_support(&self) -> Option<usize> {
        self.values.iter().position(|&v| v != 0)
    }

    pub fn max_support(&self) -> Option<usize> {
        self.values.iter().rposition(|&v| v != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn max_value(&self) -> u8 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// True iff some value equals the level.
    pub fn attains(&self) -> bool {
        self.level > 0 && self.values.contains(&self.level)
    }

    /// Same values, relabelled level. The new level must bound every value.
    pub fn with_level(&self, level: u8) -> Result<Self> {
        if self.max_value() > level {
            return Err(Error::LevelMismatch { expected: level, found: self.max_value() });
        }
        Ok(FinElement { level, values: self.values.clone() })
    }

    /// The tetris operation T_i: values below `i` stay, values `>= i` drop by one.
    /// T_0 is the identity. For `i >= 1` the level drops by one.
    pub fn tetris(&self, i: u8) -> Result<Self> {
        if i > self.level {
            return Err(Error::OperationOutOfRange { index: i, level: self.level });
        }
        if i == 0 {
            return Ok(self.clone());
        }
        let values = self.values.iter().map(|&v| if v >= i { v - 1 } else { v }).collect();
        Ok(FinElement { level: self.level - 1, values })
    }

    /// Iterate T_1 `times` times.
    pub fn tetris1_pow(&self, times: u8) -> Self {
        let level = self.level.saturating_sub(times);
        let values = self.values.iter().map(|&v| v.saturating_sub(times)).collect();
        FinElement { level, values }
    }

    /// Partial semigroup addition; defined when `max supp(self) < min supp(other)`.
    pub fn partial_add(&self, other: &FinElement) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::LevelMismatch { expected: self.level, found: other.level });
        }
        if self.width() != other.width() {
            return Err(Error::WidthMismatch { expected: self.width(), found: other.width() });
        }
        if let (Some(hi), Some(lo)) = (self.max_support(), other.min_support()) {
            if hi >= lo {
                return Err(Error::SupportOrder(format!(
                    "{} and {} interleave",
                    self.canonical(),
                    other.canonical()
                )));
            }
        }
        Ok(self.add_disjoint(other))
    }

    /// Pointwise sum of elements with disjoint supports (no order check).
    pub(crate) fn add_disjoint(&self, other: &FinElement) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        FinElement { level: self.level.max(other.level), values }
    }

    /// Packs the values into 64-bit words, `ceil(log2(k+1))` bits per value.
    pub fn pack(&self) -> Vec<u64> {
        let bits = bits_per_value(self.level);
        let per_word = 64 / bits;
        let mut words = vec![0u64; self.values.len().div_ceil(per_word).max(1)];
        for (i, &v) in self.values.iter().enumerate() {
            words[i / per_word] |= (v as u64) << ((i % per_word) * bits);
        }
        words
    }

    /// Canonical serialization `k:n:[v1,...,vn]`.
    pub fn canonical(&self) -> String {
        let body: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("{}:{}:[{}]", self.level, self.values.len(), body.join(","))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed element `{text}`"));
        let mut parts = text.splitn(3, ':');
        let level: u8 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let width: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let body = parts.next().ok_or_else(bad)?;
        let body = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let values: Vec<u32> = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',').map(|v| v.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        FinElement::new(level, width, &values)
    }
}

fn bits_per_value(level: u8) -> usize {
    (u8::BITS - level.leading_zeros()).max(1) as usize
}

impl Ord for FinElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.values
            .len()
            .cmp(&other.values.len())
            .then_with(|| self.values.cmp(&other.values))
            .then_with(|| self.level.cmp(&other.level))
    }
}

impl PartialOrd for FinElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl fmt::Display for FinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// All of FIN_k(n) in lexicographic order of value sequences; with `attain`
/// only the elements that take the value k somewhere.
pub fn enumerate_elements(level: u8, width: usize, attain: bool) -> Result<ElementIter> {
    if level < 1 || width < 1 {
        return Err(Error::InvalidParameter(format!("need k, n >= 1 (got k={level}, n={width})")));
    }
    Ok(ElementIter { level, attain, next: Some(vec![0; width]) })
}

pub struct ElementIter {
    level: u8,
    attain: bool,
    next: Option<Vec<u8>>,
}

impl Iterator for ElementIter {
    type Item = FinElement;

    fn next(&mut self) -> Option<FinElement> {
        loop {
            let current = self.next.take()?;
            let mut succ = current.clone();
            let mut pos = succ.len();
            let mut advanced = false;
            while pos > 0 {
                pos -= 1;
                if succ[pos] < self.level {
                    succ[pos] += 1;
                    advanced = true;
                    break;
                }
                succ[pos] = 0;
            }
            if advanced {
                self.next = Some(succ);
            }
            if !self.attain || current.contains(&self.level) {
                return Some(FinElement { level: self.level, values: current });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    #[test]
    fn make_element_examples() {
        let p = el(2, &[0, 2, 1]);
        assert_eq!(p.support().collect::<Vec<_>>(), vec![1, 2]);
        assert!(p.attains());
        assert!(!el(2, &[0, 1, 1]).attains());
        assert!(matches!(
            FinElement::new(2, 3, &[0, 3, 1]),
            Err(Error::ValueOutOfRange { position: 2, value: 3, level: 2 })
        ));
        assert!(FinElement::new(0, 3, &[0, 0, 0]).is_err());
        assert!(FinElement::new(1, 0, &[]).is_err());
    }

    #[test]
    fn tetris_examples() {
        let p = el(2, &[0, 2, 1]);
        assert_eq!(p.tetris(1).unwrap(), el(1, &[0, 1, 0]));
        assert_eq!(p.tetris(2).unwrap(), el(1, &[0, 1, 1]));
        assert_eq!(p.tetris(0).unwrap(), p);
        assert!(p.tetris(3).is_err());
    }

    #[test]
    fn partial_add_examples() {
        assert_eq!(el(1, &[1, 0, 0]).partial_add(&el(1, &[0, 0, 1])).unwrap(), el(1, &[1, 0, 1]));
        assert!(matches!(
            el(1, &[1, 0, 1]).partial_add(&el(1, &[0, 1, 0])),
            Err(Error::SupportOrder(_))
        ));
        assert_eq!(el(2, &[2, 0, 0]).partial_add(&el(2, &[0, 2, 0])).unwrap(), el(2, &[2, 2, 0]));
        assert!(el(2, &[2, 0]).partial_add(&el(1, &[0, 1])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        let all: Vec<_> = enumerate_elements(1, 2, true).unwrap().collect();
        assert_eq!(all, vec![el(1, &[0, 1]), el(1, &[1, 0]), el(1, &[1, 1])]);
        assert_eq!(enumerate_elements(2, 1, true).unwrap().count(), 1);
        assert_eq!(enumerate_elements(2, 2, true).unwrap().count(), 5);
        for k in 1..=3u8 {
            for n in 1..=4usize {
                let total = (k as usize + 1).pow(n as u32);
                let attaining = total - (k as usize).pow(n as u32);
                assert_eq!(enumerate_elements(k, n, false).unwrap().count(), total);
                assert_eq!(enumerate_elements(k, n, true).unwrap().count(), attaining);
            }
        }
    }

    #[test]
    fn canonical_round_trip_and_pack() {
        let p = el(3, &[0, 3, 1, 2]);
        assert_eq!(p.canonical(), "3:4:[0,3,1,2]");
        assert_eq!(FinElement::parse(&p.canonical()).unwrap(), p);
        assert!(FinElement::parse("3:4:[0,3]").is_err());
        // 2 bits per value for k = 3
        assert_eq!(p.pack(), vec![0b10_01_11_00]);
    }
}
