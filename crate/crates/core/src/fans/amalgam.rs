//! Amalgamation and joint projection.
//!
//! Over each branch of `A`, the branches of `B` and `C` mapped there are
//! paired off greedily. Each pair yields one branch of `D` built block by
//! block: level `i` of `A` gets `max(|I_i^1|, |I_i^2|)` vertices, mapped
//! monotonically onto the preimages `I_i^ε` of level `i`. All branches are
//! padded to a common height at the end by repeating their top vertex.

use super::{check_epimorphism, FanMap, OrderedFan};
use crate::error::{Error, Result};

/// A source branch seen through its map to `A`: the level of each vertex.
struct Levels {
    branch: usize,
    levels: Vec<usize>,
}

impl Levels {
    fn of(f: &FanMap, branch: usize) -> Self {
        let src = f.source();
        let levels =
            (0..=src.height()).map(|i| f.target().locate(f.apply(src.vertex(branch, i))).1).collect();
        Levels { branch, levels }
    }

    fn reach(&self) -> usize {
        *self.levels.last().unwrap()
    }

    /// Source levels mapped to target level `i`, as a range.
    fn preimage(&self, i: usize) -> (usize, usize) {
        let lo = self.levels.iter().position(|&x| x == i).expect("unit steps hit every level up to the reach");
        let hi = self.levels.iter().rposition(|&x| x == i).unwrap();
        (lo, hi)
    }
}

/// One branch of `D` as a chain of (level in B-branch, level in C-branch).
struct Merged {
    b: usize,
    c: usize,
    chain: Vec<(usize, usize)>,
}

/// The single-branch construction up to the lower of the two reaches.
fn merge(b: &Levels, c: &Levels) -> Merged {
    let top = b.reach().min(c.reach());
    let mut chain = Vec::new();
    for i in 0..=top {
        let (b_lo, b_hi) = b.preimage(i);
        let (c_lo, c_hi) = c.preimage(i);
        let block = (b_hi - b_lo + 1).max(c_hi - c_lo + 1);
        for p in 0..block {
            chain.push(((b_lo + p).min(b_hi), (c_lo + p).min(c_hi)));
        }
    }
    Merged { b: b.branch, c: c.branch, chain }
}

/// Pairs branches in order; both lists end with a branch reaching the top,
/// so every branch is eventually consumed in full.
fn forward(bs: &[&Levels], cs: &[&Levels]) -> Vec<Merged> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < bs.len() && j < cs.len() {
        let (b, c) = (bs[i], cs[j]);
        out.push(merge(b, c));
        match b.reach().cmp(&c.reach()) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let (b_last, c_last) = (i + 1 == bs.len(), j + 1 == cs.len());
                if !(b_last && !c_last) {
                    i += 1;
                }
                if !(c_last && !b_last) {
                    j += 1;
                }
            }
        }
    }
    out
}

/// Mirror image of [`forward`] for lists starting with a top-reaching branch.
fn backward(bs: &[&Levels], cs: &[&Levels]) -> Vec<Merged> {
    let rb: Vec<&Levels> = bs.iter().rev().copied().collect();
    let rc: Vec<&Levels> = cs.iter().rev().copied().collect();
    let mut out = forward(&rb, &rc);
    out.reverse();
    out
}

fn group(f: &FanMap, s: usize) -> Vec<Levels> {
    let bounds = f.boundaries();
    (bounds[s - 1]..bounds[s]).map(|j| Levels::of(f, j)).collect()
}

/// `D` with `ψ1: D -> B`, `ψ2: D -> C` and `φ1 ∘ ψ1 = φ2 ∘ ψ2`.
pub fn amalgamate(phi1: &FanMap, phi2: &FanMap) -> Result<(OrderedFan, FanMap, FanMap)> {
    check_epimorphism(phi1)?;
    check_epimorphism(phi2)?;
    if phi1.target() != phi2.target() {
        return Err(Error::InvalidParameter("the two maps have different targets".into()));
    }
    let a = phi1.target();
    let (b, c) = (phi1.source(), phi2.source());
    if a.height() == 0 {
        return joint_projection(b, c);
    }
    let mut merged = Vec::new();
    for s in 1..=a.width() {
        let gb = group(phi1, s);
        let gc = group(phi2, s);
        let tb = gb.iter().position(|x| x.reach() == a.height()).expect("epimorphisms reach the top in every group");
        let tc = gc.iter().position(|x| x.reach() == a.height()).expect("epimorphisms reach the top in every group");
        let rb: Vec<&Levels> = gb.iter().collect();
        let rc: Vec<&Levels> = gc.iter().collect();
        // Both halves pair the split branches with each other; keep that branch once.
        merged.extend(forward(&rb[..=tb], &rc[..=tc]));
        merged.extend(backward(&rb[tb..], &rc[tc..]).into_iter().skip(1));
    }
    let height = merged.iter().map(|m| m.chain.len() - 1).max().unwrap_or(0);
    let d = OrderedFan::new(height, merged.len())?;
    let mut psi1 = vec![0; d.vertex_count()];
    let mut psi2 = vec![0; d.vertex_count()];
    for (k, m) in merged.iter().enumerate() {
        for i in 1..=height {
            let (yb, yc) = m.chain[i.min(m.chain.len() - 1)];
            psi1[d.vertex(k + 1, i)] = b.vertex(m.b, yb);
            psi2[d.vertex(k + 1, i)] = c.vertex(m.c, yc);
        }
    }
    let psi1 = FanMap::new(d, b, psi1)?;
    let psi2 = FanMap::new(d, c, psi2)?;
    check_epimorphism(&psi1)?;
    check_epimorphism(&psi2)?;
    if psi1.then(phi1)? != psi2.then(phi2)? {
        return Err(Error::NotEpimorphism("amalgamation square does not commute".into()));
    }
    Ok((d, psi1, psi2))
}

/// The fan of maximal height and width, projected onto both factors by
/// truncating levels and merging surplus branches into the last one.
pub fn joint_projection(a: OrderedFan, b: OrderedFan) -> Result<(OrderedFan, FanMap, FanMap)> {
    let c = OrderedFan::new(a.height().max(b.height()), a.width().max(b.width()))?;
    let onto = |t: OrderedFan| -> Result<FanMap> {
        let steps: Vec<(usize, Vec<usize>)> =
            (1..=c.width()).map(|j| (j.min(t.width()), (1..=t.height()).collect())).collect();
        FanMap::from_steps(c, t, &steps)
    };
    let (ga, gb) = (onto(a)?, onto(b)?);
    check_epimorphism(&ga)?;
    check_epimorphism(&gb)?;
    Ok((c, ga, gb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans::enumerate_epimorphisms;

    #[test]
    fn claim_example() {
        let a = OrderedFan::chain(1);
        let b = OrderedFan::chain(2);
        let phi1 = FanMap::new(b, a, vec![0, 0, 1]).unwrap();
        let phi2 = FanMap::new(b, a, vec![0, 1, 1]).unwrap();
        let (d, psi1, psi2) = amalgamate(&phi1, &phi2).unwrap();
        assert_eq!(d, OrderedFan::chain(3));
        assert_eq!(psi1.assignment(), &[0, 1, 2, 2]);
        assert_eq!(psi2.assignment(), &[0, 0, 1, 2]);
        assert_eq!(psi1.then(&phi1).unwrap().assignment(), &[0, 0, 1, 1]);
    }

    #[test]
    fn identity_square() {
        let a = OrderedFan::chain(1);
        let id = FanMap::identity(a);
        let (d, psi1, psi2) = amalgamate(&id, &id).unwrap();
        assert_eq!(d, a);
        assert_eq!(psi1, id);
        assert_eq!(psi2, id);
    }

    #[test]
    fn sweep_small() {
        let fans: Vec<OrderedFan> =
            (0..=2).flat_map(|h| (1..=2).map(move |w| OrderedFan::new(h, w).unwrap())).collect();
        for &a in &fans {
            for &b in &fans {
                for &c in &fans {
                    for p1 in enumerate_epimorphisms(b, a) {
                        for p2 in enumerate_epimorphisms(c, a) {
                            amalgamate(&p1, &p2).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn joint_projection_examples() {
        let a = OrderedFan::chain(1);
        let (c, ga, gb) = joint_projection(a, a).unwrap();
        assert_eq!(c, a);
        assert_eq!(ga, FanMap::identity(a));
        assert_eq!(gb, FanMap::identity(a));
        let (c, _, gb) = joint_projection(a, OrderedFan::chain(2)).unwrap();
        assert_eq!(c, OrderedFan::chain(2));
        assert_eq!(gb, FanMap::identity(c));
        let (c, _, _) = joint_projection(OrderedFan::new(1, 2).unwrap(), a).unwrap();
        assert_eq!(c, OrderedFan::new(1, 2).unwrap());
    }
}
