//! Coding an epimorphism `U -> S` by a block sequence in `FIN_k^{[d]}(n)`
//! and by the sets of levels where each branch steps up.

use super::{check_epimorphism, FanMap};
use crate::error::{Error, Result};
use crate::fin::{BlockSequence, FinElement};

/// `f*` and the family `F^f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EncodedEpi {
    /// Entry `i` records, for each branch `j` of `U` sent into branch `i`
    /// of `S`, the level reached by its top.
    pub star: BlockSequence,
    /// `sets[i][j]`: least levels of branch `j` of `U` hitting levels
    /// `1..=p_i(j)` of branch `i` of `S`; empty off the support.
    pub sets: Vec<Vec<Vec<usize>>>,
}

pub fn encode_epimorphism(f: &FanMap) -> Result<EncodedEpi> {
    check_epimorphism(f)?;
    let (u, s) = (f.source(), f.target());
    let k = s.height();
    if k == 0 || k > u8::MAX as usize {
        return Err(Error::InvalidParameter(format!("target height {k} cannot be encoded")));
    }
    let n = u.width();
    let mut entries = Vec::with_capacity(s.width());
    let mut sets = Vec::with_capacity(s.width());
    for i in 1..=s.width() {
        let mut values = vec![0u32; n];
        let mut row = vec![Vec::new(); n];
        for j in 1..=n {
            if f.target_branch(j) == Some(i) {
                values[j - 1] = f.reach(j) as u32;
                row[j - 1] = f.step_positions(j);
            }
        }
        entries.push(FinElement::new(k as u8, n, &values)?);
        sets.push(row);
    }
    Ok(EncodedEpi { star: BlockSequence::new(entries)?, sets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans::{enumerate_epimorphisms, OrderedFan};
    use std::collections::BTreeSet;

    #[test]
    fn two_branches_onto_an_edge() {
        let u = OrderedFan::new(2, 2).unwrap();
        let s = OrderedFan::chain(1);
        let codes: Vec<EncodedEpi> =
            enumerate_epimorphisms(u, s).iter().map(|f| encode_epimorphism(f).unwrap()).collect();
        assert_eq!(codes.len(), 8);
        let stars: BTreeSet<Vec<u8>> = codes.iter().map(|c| c.star.entries()[0].values().to_vec()).collect();
        assert_eq!(stars, BTreeSet::from([vec![1, 0], vec![0, 1], vec![1, 1]]));
        let families: BTreeSet<_> = codes.iter().map(|c| c.sets.clone()).collect();
        assert_eq!(families.len(), 8);
    }

    #[test]
    fn collapsed_branch_leaves_support() {
        let u = OrderedFan::new(2, 2).unwrap();
        let s = OrderedFan::chain(1);
        let f = FanMap::from_steps(u, s, &[(1, vec![2]), (0, vec![])]).unwrap();
        let code = encode_epimorphism(&f).unwrap();
        assert_eq!(code.star.entries()[0].support().collect::<Vec<_>>(), vec![0]);
        assert_eq!(code.sets[0], vec![vec![2], vec![]]);
    }
}
