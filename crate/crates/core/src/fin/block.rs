use std::fmt;

use serde::{Deserialize, Serialize};

use super::element::FinElement;
use crate::error::{Error, Result};

/// A nonempty finite block sequence of attaining elements sharing level and width.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockSequence {
    entries: Vec<FinElement>,
}

impl BlockSequence {
    pub fn new(entries: Vec<FinElement>) -> Result<Self> {
        let first = entries.first().ok_or_else(|| Error::InvalidParameter("empty block sequence".into()))?;
        let (level, width) = (first.level(), first.width());
        let mut prev_max: Option<usize> = None;
        for e in &entries {
            if e.level() != level {
                return Err(Error::LevelMismatch { expected: level, found: e.level() });
            }
            if e.width() != width {
                return Err(Error::WidthMismatch { expected: width, found: e.width() });
            }
            if !e.attains() {
                return Err(Error::NotAttaining(e.canonical()));
            }
            let lo = e.min_support().expect("attaining elements are nonzero");
            if let Some(hi) = prev_max {
                if hi >= lo {
                    return Err(Error::SupportOrder(format!("entry {} starts at or before position {}", e, hi + 1)));
                }
            }
            prev_max = e.max_support();
        }
        Ok(BlockSequence { entries })
    }

    pub(crate) fn from_raw(entries: Vec<FinElement>) -> Self {
        debug_assert!(BlockSequence::new(entries.clone()).is_ok());
        BlockSequence { entries }
    }

    pub fn level(&self) -> u8 {
        self.entries[0].level()
    }

    pub fn width(&self) -> usize {
        self.entries[0].width()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[FinElement] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<FinElement> {
        self.entries
    }

    /// Entrywise T_1.
    pub fn tetris1(&self) -> Result<BlockSequence> {
        let entries = self.entries.iter().map(|e| e.tetris(1)).collect::<Result<Vec<_>>>()?;
        BlockSequence::new(entries)
    }

    /// Canonical text: entries joined by `;`.
    pub fn canonical(&self) -> String {
        self.entries.iter().map(|e| e.canonical()).collect::<Vec<_>>().join(";")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let entries = text.split(';').map(FinElement::parse).collect::<Result<Vec<_>>>()?;
        BlockSequence::new(entries)
    }

    /// True iff every entry of `self` is `sum(coeff_i * chi(a_i))` for the blocks
    /// of `base` (a block sequence in FIN_1 of the same width).
    pub fn lies_in(&self, base: &BlockSequence) -> bool {
        self.entries.iter().all(|e| {
            base.entries.iter().all(|a| {
                let mut vals = a.support().map(|x| e.value(x));
                match vals.next() {
                    Some(v) => vals.all(|w| w == v),
                    None => true,
                }
            }) && e.support().all(|x| base.entries.iter().any(|a| a.value(x) != 0))
        })
    }
}

impl fmt::Debug for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.canonical())
    }
}

impl fmt::Display for BlockSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// All elements of FIN_k(n) attaining k whose support lies in `lo..n`
/// (zero-based), in lexicographic order.
pub(crate) fn attaining_from(level: u8, width: usize, lo: usize) -> Vec<FinElement> {
    let span = width - lo;
    let mut out = Vec::new();
    let mut digits = vec![0u8; span];
    loop {
        if digits.contains(&level) {
            let mut values = vec![0u8; lo];
            values.extend_from_slice(&digits);
            out.push(FinElement::from_raw(level, values));
        }
        let mut pos = span;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if digits[pos] < level {
                digits[pos] += 1;
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// All length-`d` block sequences of attaining elements of FIN_k(n), in
/// lexicographic order of the entry tuple. Empty when `d > n`, including `n = 0`.
pub fn enumerate_block_sequences(level: u8, width: usize, d: usize) -> Result<Vec<BlockSequence>> {
    if level < 1 || d < 1 {
        return Err(Error::InvalidParameter(format!("need k, d >= 1 (got k={level}, d={d})")));
    }
    let mut out = Vec::new();
    if d > width {
        return Ok(out);
    }
    let mut prefix = Vec::with_capacity(d);
    extend_blocks(level, width, d, 0, &mut prefix, &mut out);
    Ok(out)
}

fn extend_blocks(
    level: u8,
    width: usize,
    d: usize,
    lo: usize,
    prefix: &mut Vec<FinElement>,
    out: &mut Vec<BlockSequence>,
) {
    if prefix.len() == d {
        out.push(BlockSequence { entries: prefix.clone() });
        return;
    }
    let remaining = d - prefix.len();
    if width - lo < remaining {
        return;
    }
    for e in attaining_from(level, width, lo) {
        let hi = e.max_support().unwrap();
        if width - (hi + 1) < remaining - 1 {
            continue;
        }
        prefix.push(e);
        extend_blocks(level, width, d, hi + 1, prefix, out);
        prefix.pop();
    }
}

/// Unit blocks `chi({1}), ..., chi({n})` in FIN_1(n).
pub fn unit_blocks(width: usize) -> BlockSequence {
    let entries = (0..width).map(|i| FinElement::indicator(1, width, &[i], 1)).collect();
    BlockSequence { entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let seqs = enumerate_block_sequences(1, 2, 2).unwrap();
        assert_eq!(seqs, vec![BlockSequence::new(vec![el(1, &[1, 0]), el(1, &[0, 1])]).unwrap()]);
        assert_eq!(enumerate_block_sequences(1, 3, 2).unwrap().len(), 5);
        assert!(enumerate_block_sequences(2, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn enumeration_matches_filtered_product() {
        use crate::fin::element::enumerate_elements;
        for (k, n, d) in [(1u8, 4usize, 2usize), (2, 3, 2), (2, 4, 3), (1, 5, 3)] {
            let all: Vec<_> = enumerate_elements(k, n, true).unwrap().collect();
            let mut brute = Vec::new();
            let mut idx = vec![0usize; d];
            'outer: loop {
                let entries: Vec<_> = idx.iter().map(|&i| all[i].clone()).collect();
                if let Ok(b) = BlockSequence::new(entries) {
                    brute.push(b);
                }
                let mut pos = d;
                loop {
                    if pos == 0 {
                        break 'outer;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < all.len() {
                        break;
                    }
                    idx[pos] = 0;
                }
            }
            assert_eq!(enumerate_block_sequences(k, n, d).unwrap(), brute);
        }
    }

    #[test]
    fn validation() {
        assert!(BlockSequence::new(vec![]).is_err());
        assert!(matches!(
            BlockSequence::new(vec![el(1, &[1, 1]), el(1, &[0, 1])]),
            Err(Error::SupportOrder(_))
        ));
        assert!(matches!(BlockSequence::new(vec![el(2, &[1, 0])]), Err(Error::NotAttaining(_))));
        let b = BlockSequence::new(vec![el(2, &[2, 0, 0]), el(2, &[0, 1, 2])]).unwrap();
        assert_eq!(BlockSequence::parse(&b.canonical()).unwrap(), b);
    }
}
