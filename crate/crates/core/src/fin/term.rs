use serde::{Deserialize, Serialize};

use super::block::BlockSequence;
use super::element::FinElement;
use super::opvec::{vec_plus_one, OpKind, OpVector, ValueMap};
use crate::error::{Error, Result};

/// One summand `T_t o T_i (b_index)` of a span element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub index: usize,
    pub t: OpVector,
    pub i: OpVector,
}

impl Term {
    fn map(&self) -> Result<ValueMap> {
        Ok(OpVector::concat(&self.t, &self.i)?.value_map())
    }
}

/// Symbolic form of a combined-span element: `sum_s T_{t_s} o T_{i_s}(b_s)`.
///
/// Terms are stored with the canonical (zeros-first) vectors of their value
/// maps, so two representations are equal iff they select the same entries
/// with the same composites.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermRepr {
    base: BlockSequence,
    level: u8,
    terms: Vec<Term>,
}

/// Direction argument of [`t1_shift_terms`].
pub enum Shift<'a> {
    Image,
    /// Re-base on the given block sequence, whose T_1 image must be the current base.
    Preimage(&'a BlockSequence),
}

impl TermRepr {
    /// Validates and canonicalizes. `level` is the target level k.
    pub fn new(base: BlockSequence, level: u8, terms: Vec<Term>) -> Result<Self> {
        let l = base.level();
        if level > l {
            return Err(Error::InvalidParameter(format!("term level {level} exceeds base level {l}")));
        }
        let mut canon = Vec::with_capacity(terms.len());
        let mut last: Option<usize> = None;
        let mut has_top = false;
        for term in terms {
            if term.index >= base.len() {
                return Err(Error::CorruptTerm(format!("index {} outside base of length {}", term.index, base.len())));
            }
            if last.is_some_and(|p| p >= term.index) {
                return Err(Error::CorruptTerm("term indices must increase".into()));
            }
            last = Some(term.index);
            if term.t.kind() != OpKind::Full || term.t.input_level() != level {
                return Err(Error::CorruptTerm(format!("t-vector {:?} is not in P_{level}", term.t)));
            }
            if term.i.kind() != (OpKind::Upper { lower: level }) || term.i.input_level() != l {
                return Err(Error::CorruptTerm(format!("i-vector {:?} is not in P_{}^{l}", term.i, level + 1)));
            }
            let map = term.map()?;
            if map.output_level() == 0 {
                continue;
            }
            has_top |= map.output_level() == level;
            let (t, i) = map.split(level)?;
            canon.push(Term { index: term.index, t, i });
        }
        if !has_top {
            return Err(Error::CorruptTerm("no term has an all-zero t-vector".into()));
        }
        Ok(TermRepr { base, level, terms: canon })
    }

    /// Builds from value maps already known to be valid.
    pub(crate) fn from_maps(base: BlockSequence, level: u8, maps: &[(usize, &ValueMap)]) -> Self {
        let terms = maps
            .iter()
            .filter(|(_, m)| m.output_level() > 0)
            .map(|&(index, m)| {
                let (t, i) = m.split(level).expect("map fits the level");
                Term { index, t, i }
            })
            .collect();
        TermRepr { base, level, terms }
    }

    pub fn base(&self) -> &BlockSequence {
        &self.base
    }

    pub fn level(&self) -> u8 {
        self.level
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Evaluates the sum. The result attains the level.
    pub fn evaluate(&self) -> Result<FinElement> {
        let width = self.base.width();
        let mut acc = FinElement::zero(self.level, width);
        for term in &self.terms {
            let b = &self.base.entries()[term.index];
            let img = term.t.apply(&term.i.apply(b)?)?;
            acc = acc.add_disjoint(&img.with_level(self.level)?);
        }
        let acc = acc.with_level(self.level)?;
        if !acc.attains() {
            return Err(Error::CorruptTerm(format!("evaluation {acc} does not attain {}", self.level)));
        }
        Ok(acc)
    }

    /// Representation of `T_1(self)` over the base `T_1(B)` at level `k-1`.
    pub fn image(&self) -> Result<TermRepr> {
        if self.level < 2 {
            return Err(Error::InvalidParameter("T_1 image needs level >= 2".into()));
        }
        let base = self.base.tetris1()?;
        let mut maps = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            maps.push((term.index, term.map()?.t1_shift()));
        }
        let refs: Vec<(usize, &ValueMap)> = maps.iter().map(|(s, m)| (*s, m)).collect();
        Ok(TermRepr::from_maps(base, self.level - 1, &refs))
    }

    /// Lifts to a representation over `base` (level l+1) with `T_1` of the
    /// result equal to `self`. Uses `vec_plus_one` on each term.
    pub fn preimage(&self, base: &BlockSequence) -> Result<TermRepr> {
        if base.tetris1()? != self.base {
            return Err(Error::InvalidParameter("T_1 of the new base differs from the current base".into()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let joint = term.map()?.to_vector();
            let lifted = vec_plus_one(&joint)?;
            let (t, i) = lifted.value_map().split(self.level + 1)?;
            terms.push(Term { index: term.index, t, i });
        }
        let lifted = TermRepr::new(base.clone(), self.level + 1, terms)?;
        if lifted.image()? != *self {
            return Err(Error::CorruptTerm("lifted terms do not shift back".into()));
        }
        Ok(lifted)
    }

    /// True iff every term's canonical vector avoids the coordinate value 1,
    /// i.e. the term lies in the image of `vec_plus_one`.
    pub fn is_shift_normal(&self) -> bool {
        self.terms.iter().all(|t| t.t.coords().iter().chain(t.i.coords()).all(|&c| c != 1))
    }
}

pub fn t1_shift_terms(t: &TermRepr, direction: Shift<'_>) -> Result<TermRepr> {
    match direction {
        Shift::Image => t.image(),
        Shift::Preimage(base) => t.preimage(base),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    #[test]
    fn trivial_image() {
        let b = BlockSequence::new(vec![el(2, &[2])]).unwrap();
        let t = TermRepr::new(
            b.clone(),
            2,
            vec![Term { index: 0, t: OpVector::zero(2), i: OpVector::upper_identity(2) }],
        )
        .unwrap();
        let img = t.image().unwrap();
        assert_eq!(img.base(), &BlockSequence::new(vec![el(1, &[1])]).unwrap());
        assert_eq!(img.terms()[0].t, OpVector::zero(1));
        assert_eq!(img.evaluate().unwrap(), el(1, &[1]));
        assert_eq!(img.preimage(&b).unwrap(), t);
    }

    #[test]
    fn rejects_corrupt_terms() {
        let b = BlockSequence::new(vec![el(2, &[2, 0]), el(2, &[0, 2])]).unwrap();
        let no_top = vec![Term { index: 0, t: OpVector::full(vec![0, 1]).unwrap(), i: OpVector::upper_identity(2) }];
        assert!(matches!(TermRepr::new(b.clone(), 2, no_top), Err(Error::CorruptTerm(_))));
        let bad_order = vec![
            Term { index: 1, t: OpVector::zero(2), i: OpVector::upper_identity(2) },
            Term { index: 0, t: OpVector::zero(2), i: OpVector::upper_identity(2) },
        ];
        assert!(TermRepr::new(b.clone(), 2, bad_order).is_err());
        let wrong_base = BlockSequence::new(vec![el(2, &[2, 0])]).unwrap();
        let t = TermRepr::new(b, 2, vec![Term { index: 0, t: OpVector::zero(2), i: OpVector::upper_identity(2) }])
            .unwrap();
        assert!(t.image().unwrap().preimage(&wrong_base).is_err());
    }
}
