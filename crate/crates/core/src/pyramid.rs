//! Pyramids, height vectors and the `q ↦ q^C` transfer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fin::{unit_blocks, BlockSequence, FinElement};

/// A block sequence of pyramids of a common height, each laid over `2l-1`
/// consecutive blocks of an underlying FIN_1 sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidSeq {
    height: u8,
    seq: BlockSequence,
}

impl PyramidSeq {
    pub fn height(&self) -> u8 {
        self.height
    }

    pub fn count(&self) -> usize {
        self.seq.len()
    }

    pub fn width(&self) -> usize {
        self.seq.width()
    }

    pub fn entries(&self) -> &[FinElement] {
        self.seq.entries()
    }

    pub fn sequence(&self) -> &BlockSequence {
        &self.seq
    }

    /// `T_1` applied entrywise: pyramids of height `l-1` on the inner blocks.
    pub fn tetris1(&self) -> Result<PyramidSeq> {
        if self.height < 2 {
            return Err(Error::InvalidParameter("T_1 of height-1 pyramids vanishes".into()));
        }
        Ok(PyramidSeq { height: self.height - 1, seq: self.seq.tetris1()? })
    }
}

/// Pyramids of height `l` over `a`, whose length must be a multiple of `2l-1`:
/// `c_i = sum_j (l-|j|)·χ(a_{q_i+j})` with `q_i = (i-1)(2l-1)+l`.
pub fn pyramids_over(l: u8, a: &BlockSequence) -> Result<PyramidSeq> {
    if l < 1 {
        return Err(Error::InvalidParameter("pyramid height must be >= 1".into()));
    }
    if a.level() != 1 {
        return Err(Error::LevelMismatch { expected: 1, found: a.level() });
    }
    let span = 2 * l as usize - 1;
    if a.is_empty() || a.len() % span != 0 {
        return Err(Error::InvalidParameter(format!("{} blocks do not split into runs of {span}", a.len())));
    }
    let mut entries = Vec::with_capacity(a.len() / span);
    for chunk in a.entries().chunks(span) {
        let mut values = vec![0u8; a.width()];
        for (j, block) in chunk.iter().enumerate() {
            let v = l - (j as i32 - (l as i32 - 1)).unsigned_abs() as u8;
            for x in block.support() {
                values[x] = v;
            }
        }
        entries.push(FinElement::from_raw(l, values));
    }
    Ok(PyramidSeq { height: l, seq: BlockSequence::from_raw(entries) })
}

/// `count` pyramids of height `l` over unit blocks of width `count·(2l-1)`.
pub fn make_pyramid_sequence(l: u8, count: usize) -> Result<PyramidSeq> {
    if l < 1 || count < 1 {
        return Err(Error::InvalidParameter("need l >= 1 and count >= 1".into()));
    }
    pyramids_over(l, &unit_blocks(count * (2 * l as usize - 1)))
}

/// `ht(p)`: per pyramid, the largest value of `p` on that pyramid's support.
pub fn height_vector(c: &PyramidSeq, p: &FinElement) -> Result<FinElement> {
    if p.width() != c.width() {
        return Err(Error::WidthMismatch { expected: c.width(), found: p.width() });
    }
    let values = c.entries().iter().map(|ci| ci.support().map(|x| p.value(x)).max().unwrap_or(0)).collect();
    Ok(FinElement::from_raw(p.level(), values))
}

/// `ht` applied entrywise to a block sequence.
pub fn height_vector_tuple(c: &PyramidSeq, p: &BlockSequence) -> Result<BlockSequence> {
    let hts = p.entries().iter().map(|e| height_vector(c, e)).collect::<Result<Vec<_>>>()?;
    BlockSequence::new(hts)
}

/// `q^C = sum_{i in supp q} T_1^{l-q(i)}(c_i)`, at the level of `q`.
pub fn pyramid_lift(q: &FinElement, c: &PyramidSeq) -> Result<FinElement> {
    let l = c.height();
    if q.level() > l {
        return Err(Error::InvalidParameter(format!("level {} exceeds pyramid height {l}", q.level())));
    }
    if q.width() != c.count() {
        return Err(Error::WidthMismatch { expected: c.count(), found: q.width() });
    }
    let mut values = vec![0u8; c.width()];
    for i in q.support() {
        let shaved = c.entries()[i].tetris1_pow(l - q.value(i));
        for x in shaved.support() {
            values[x] = shaved.value(x);
        }
    }
    Ok(FinElement::from_raw(q.level(), values))
}

/// `d_s = b_s^C` for every entry of `b`.
pub fn followup_transfer(b: &BlockSequence, c: &PyramidSeq) -> Result<BlockSequence> {
    let entries = b.entries().iter().map(|e| pyramid_lift(e, c)).collect::<Result<Vec<_>>>()?;
    Ok(BlockSequence::from_raw(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fin::{all_full, all_upper, enumerate_block_sequences, enumerate_elements};

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    #[test]
    fn pyramid_examples() {
        assert_eq!(make_pyramid_sequence(2, 1).unwrap().entries()[0].values(), &[1, 2, 1]);
        let two = make_pyramid_sequence(2, 2).unwrap();
        assert_eq!(two.entries()[0].values(), &[1, 2, 1, 0, 0, 0]);
        assert_eq!(two.entries()[1].values(), &[0, 0, 0, 1, 2, 1]);
        assert_eq!(make_pyramid_sequence(3, 1).unwrap().entries()[0].values(), &[1, 2, 3, 2, 1]);
    }

    #[test]
    fn height_examples() {
        let c = make_pyramid_sequence(2, 2).unwrap();
        assert_eq!(height_vector(&c, &el(2, &[1, 2, 1, 0, 1, 0])).unwrap().values(), &[2, 1]);
        assert_eq!(height_vector(&c, &c.entries()[0]).unwrap().values(), &[2, 0]);
        assert!(height_vector(&c, &el(2, &[2])).is_err());
    }

    #[test]
    fn lift_examples() {
        let c = make_pyramid_sequence(2, 2).unwrap();
        assert_eq!(pyramid_lift(&el(2, &[2, 1]), &c).unwrap().values(), &[1, 2, 1, 0, 1, 0]);
        let one = make_pyramid_sequence(2, 1).unwrap();
        assert_eq!(pyramid_lift(&el(2, &[2]), &one).unwrap().values(), &[1, 2, 1]);
        for q in enumerate_elements(2, 2, false).unwrap() {
            assert_eq!(height_vector(&c, &pyramid_lift(&q, &c).unwrap()).unwrap(), q);
        }
    }

    #[test]
    fn transfer_examples() {
        let one = make_pyramid_sequence(2, 1).unwrap();
        let b = BlockSequence::new(vec![el(2, &[2])]).unwrap();
        assert_eq!(followup_transfer(&b, &one).unwrap().entries()[0].values(), &[1, 2, 1]);
        let two = make_pyramid_sequence(2, 2).unwrap();
        let b = BlockSequence::new(vec![el(2, &[2, 0]), el(2, &[0, 2])]).unwrap();
        assert_eq!(followup_transfer(&b, &two).unwrap(), *two.sequence());

        let three = make_pyramid_sequence(2, 3).unwrap();
        for b in enumerate_block_sequences(2, 3, 2).unwrap() {
            let d = followup_transfer(&b, &three).unwrap();
            assert_eq!(height_vector_tuple(&three, &d).unwrap(), b);
        }
    }

    #[test]
    fn pyramid_images_have_unit_ends() {
        for l in 1..=4u8 {
            let c = make_pyramid_sequence(l, 1).unwrap().entries()[0].clone();
            let mut vectors = all_full(l);
            for k in 1..l {
                vectors.extend(all_upper(k, l));
            }
            for v in vectors {
                let img = v.apply(&c).unwrap();
                if img.is_zero() {
                    continue;
                }
                assert_eq!(img.value(img.min_support().unwrap()), 1);
                assert_eq!(img.value(img.max_support().unwrap()), 1);
            }
        }
    }
}
