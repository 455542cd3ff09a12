//! Finite ordered fans: a root with `w` chains of equal height `h`, the
//! chains linearly ordered. Maps between fans are vertex assignments.

use std::fmt;

use crate::error::{Error, Result};

mod amalgam;
mod encode;
mod epi;

pub use amalgam::{amalgamate, joint_projection};
pub use encode::{encode_epimorphism, EncodedEpi};
pub use epi::{enumerate_epimorphisms, naive_epimorphisms};

/// Fan of height `h` and width `w`. Vertex 0 is the root; level `i >= 1` of
/// branch `j` (both 1-based) is vertex `1 + (j - 1) h + (i - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedFan {
    height: usize,
    width: usize,
}

impl OrderedFan {
    pub fn new(height: usize, width: usize) -> Result<Self> {
        if width < 1 {
            return Err(Error::InvalidParameter("a fan has at least one branch".into()));
        }
        Ok(OrderedFan { height, width })
    }

    pub fn chain(height: usize) -> Self {
        OrderedFan { height, width: 1 }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.height * self.width
    }

    /// Vertex at `level` of `branch`; level 0 is the root.
    pub fn vertex(&self, branch: usize, level: usize) -> usize {
        debug_assert!((1..=self.width).contains(&branch) && level <= self.height);
        if level == 0 {
            0
        } else {
            1 + (branch - 1) * self.height + (level - 1)
        }
    }

    /// `(branch, level)`; the root reports branch 0.
    pub fn locate(&self, v: usize) -> (usize, usize) {
        if v == 0 {
            (0, 0)
        } else {
            (1 + (v - 1) / self.height, 1 + (v - 1) % self.height)
        }
    }

    /// `x = y` or `y` is the immediate successor of `x`.
    pub fn r(&self, x: usize, y: usize) -> bool {
        if x == y {
            return true;
        }
        let (bx, lx) = self.locate(x);
        let (by, ly) = self.locate(y);
        ly == lx + 1 && (bx == 0 || bx == by)
    }

    /// `x` lies on a branch not after some branch containing `y`.
    pub fn s(&self, x: usize, y: usize) -> bool {
        let lo = |v: usize| if v == 0 { 1 } else { self.locate(v).0 };
        let hi = |v: usize| if v == 0 { self.width } else { self.locate(v).0 };
        lo(x) <= hi(y)
    }

    /// Pairs of the relation `R`.
    pub fn r_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.vertex_count()).map(|v| (v, v)).collect();
        for j in 1..=self.width {
            for i in 0..self.height {
                out.push((self.vertex(j, i), self.vertex(j, i + 1)));
            }
        }
        out
    }

    /// `h:w`.
    pub fn canonical(&self) -> String {
        format!("{}:{}", self.height, self.width)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (h, w) = text.split_once(':').ok_or_else(|| Error::Parse(format!("fan {text:?} is not h:w")))?;
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad fan {text:?}")));
        OrderedFan::new(num(h)?, num(w)?)
    }
}

impl fmt::Display for OrderedFan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

/// A vertex map between two fans.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FanMap {
    source: OrderedFan,
    target: OrderedFan,
    assign: Vec<usize>,
}

impl FanMap {
    pub fn new(source: OrderedFan, target: OrderedFan, assign: Vec<usize>) -> Result<Self> {
        if assign.len() != source.vertex_count() {
            return Err(Error::LengthMismatch { expected: source.vertex_count(), found: assign.len() });
        }
        if let Some(&v) = assign.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::InvalidParameter(format!("vertex {v} outside target {target}")));
        }
        Ok(FanMap { source, target, assign })
    }

    /// Builds a map from, per source branch, the target branch and the
    /// levels at which the image steps up.
    pub fn from_steps(source: OrderedFan, target: OrderedFan, branches: &[(usize, Vec<usize>)]) -> Result<Self> {
        if branches.len() != source.width() {
            return Err(Error::LengthMismatch { expected: source.width(), found: branches.len() });
        }
        let mut assign = vec![0; source.vertex_count()];
        for (j, (tb, steps)) in branches.iter().enumerate() {
            if steps.len() > target.height() || (!steps.is_empty() && !(1..=target.width()).contains(tb)) {
                return Err(Error::NotEpimorphism(format!("branch {} has an impossible step list", j + 1)));
            }
            let mut level = 0;
            for i in 1..=source.height() {
                if steps.contains(&i) {
                    level += 1;
                }
                assign[source.vertex(j + 1, i)] = if level == 0 { 0 } else { target.vertex(*tb, level) };
            }
        }
        Ok(FanMap { source, target, assign })
    }

    pub fn identity(fan: OrderedFan) -> Self {
        FanMap { source: fan, target: fan, assign: (0..fan.vertex_count()).collect() }
    }

    pub fn source(&self) -> OrderedFan {
        self.source
    }

    pub fn target(&self) -> OrderedFan {
        self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn apply(&self, v: usize) -> usize {
        self.assign[v]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &FanMap) -> Result<FanMap> {
        if self.target != next.source {
            return Err(Error::InvalidParameter(format!(
                "cannot compose a map into {} with a map from {}",
                self.target, next.source
            )));
        }
        Ok(FanMap { source: self.source, target: next.target, assign: self.assign.iter().map(|&v| next.assign[v]).collect() })
    }

    /// Target branch of a source branch, `None` when it collapses to the root.
    pub fn target_branch(&self, branch: usize) -> Option<usize> {
        if self.source.height() == 0 {
            return None;
        }
        match self.assign[self.source.vertex(branch, self.source.height())] {
            0 => None,
            top => Some(self.target.locate(top).0),
        }
    }

    /// Levels of a source branch at which the image moves up.
    pub fn step_positions(&self, branch: usize) -> Vec<usize> {
        let level = |i: usize| self.target.locate(self.assign[self.source.vertex(branch, i)]).1;
        (1..=self.source.height()).filter(|&i| level(i) > level(i - 1)).collect()
    }

    /// Level of the image of the top of `branch`.
    pub fn reach(&self, branch: usize) -> usize {
        if self.source.height() == 0 {
            return 0;
        }
        self.target.locate(self.assign[self.source.vertex(branch, self.source.height())]).1
    }

    /// Group boundaries `1 = k_1 < ... < k_{m+1} = n + 1`, each later group
    /// starting at its first branch that leaves the root.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut out = vec![1];
        let mut current = 1;
        for j in 1..=self.source.width() {
            if let Some(t) = self.target_branch(j) {
                while current < t {
                    current += 1;
                    out.push(j);
                }
            }
        }
        while out.len() < self.target.width() {
            out.push(self.source.width() + 1);
        }
        out.push(self.source.width() + 1);
        out
    }

    /// `src->tgt:(k_1,...,k_{m+1}):steps;steps;...`.
    pub fn canonical(&self) -> String {
        let bounds: Vec<String> = self.boundaries().iter().map(|k| k.to_string()).collect();
        let steps: Vec<String> = (1..=self.source.width())
            .map(|j| {
                let s: Vec<String> = self.step_positions(j).iter().map(|x| x.to_string()).collect();
                format!("[{}]", s.join(","))
            })
            .collect();
        format!("{}->{}:({}):{}", self.source, self.target, bounds.join(","), steps.join(";"))
    }

    /// Inverse of [`FanMap::canonical`]. Branch `j` goes to the target
    /// branch whose group contains it.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad fan map {text:?}"));
        let (src, rest) = text.split_once("->").ok_or_else(bad)?;
        let (open, close) = (rest.find('(').ok_or_else(bad)?, rest.find(')').ok_or_else(bad)?);
        let target = OrderedFan::parse(rest[..open].trim_end_matches(':'))?;
        let source = OrderedFan::parse(src)?;
        let nums = |s: &str| -> Result<Vec<usize>> {
            s.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse().map_err(|_| bad())).collect()
        };
        let bounds = nums(&rest[open + 1..close])?;
        let steps_text = rest[close + 1..].strip_prefix(':').ok_or_else(bad)?;
        let steps: Vec<Vec<usize>> = if source.width() == 0 {
            Vec::new()
        } else {
            steps_text
                .split(';')
                .map(|s| nums(s.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(bad)?))
                .collect::<Result<_>>()?
        };
        let branches: Vec<(usize, Vec<usize>)> = steps
            .into_iter()
            .enumerate()
            .map(|(j, s)| (bounds.iter().take_while(|&&b| b <= j + 1).count().max(1), s))
            .collect();
        let f = FanMap::from_steps(source, target, &branches)?;
        if f.canonical() != text.replace(' ', "") {
            return Err(Error::Parse(format!("fan map {text:?} is not in canonical form ({})", f.canonical())));
        }
        Ok(f)
    }
}

impl crate::coloring::Colorable for FanMap {
    fn canonical(&self) -> String {
        FanMap::canonical(self)
    }
}

/// Checks the definition directly: `R`- and `S`-homomorphism, surjectivity,
/// and a preimage pair for every related pair of the target.
pub fn check_epimorphism(f: &FanMap) -> Result<()> {
    let (src, tgt) = (f.source, f.target);
    let fail = |why: String| Err(Error::NotEpimorphism(format!("{}: {why}", f.canonical())));
    for (x, y) in src.r_pairs() {
        if !tgt.r(f.apply(x), f.apply(y)) {
            return fail(format!("R({x},{y}) is not preserved"));
        }
    }
    let vs = src.vertex_count();
    let vt = tgt.vertex_count();
    let mut s_hit = vec![false; vt * vt];
    for x in 0..vs {
        for y in 0..vs {
            if src.s(x, y) {
                let (fx, fy) = (f.apply(x), f.apply(y));
                if !tgt.s(fx, fy) {
                    return fail(format!("S({x},{y}) is not preserved"));
                }
                s_hit[fx * vt + fy] = true;
            }
        }
    }
    let mut hit = vec![false; vt];
    for &v in &f.assign {
        hit[v] = true;
    }
    if let Some(v) = hit.iter().position(|&h| !h) {
        return fail(format!("vertex {v} of the target is not covered"));
    }
    let mut r_hit = vec![false; vt * vt];
    for (x, y) in src.r_pairs() {
        r_hit[f.apply(x) * vt + f.apply(y)] = true;
    }
    if let Some((x, y)) = tgt.r_pairs().into_iter().find(|&(x, y)| !r_hit[x * vt + y]) {
        return fail(format!("R({x},{y}) of the target has no preimage pair"));
    }
    for x in 0..vt {
        for y in 0..vt {
            if tgt.s(x, y) && !s_hit[x * vt + y] {
                return fail(format!("S({x},{y}) of the target has no preimage pair"));
            }
        }
    }
    Ok(())
}

pub fn is_epimorphism(f: &FanMap) -> bool {
    check_epimorphism(f).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_parse_round_trip() {
        let fans: Vec<OrderedFan> =
            (0..=2).flat_map(|h| (1..=3).map(move |w| OrderedFan::new(h, w).unwrap())).collect();
        for &b in &fans {
            for &a in &fans {
                for f in naive_epimorphisms(b, a) {
                    assert_eq!(FanMap::parse(&f.canonical()).unwrap(), f);
                }
            }
        }
        assert!(FanMap::parse("2:1->1:1:(1,2):[1,2]").is_err());
        assert!(FanMap::parse("1:1->1:1").is_err());
    }

    #[test]
    fn relations() {
        let f = OrderedFan::new(2, 3).unwrap();
        assert_eq!(f.vertex_count(), 7);
        assert_eq!(f.locate(f.vertex(3, 2)), (3, 2));
        assert!(f.r(0, f.vertex(2, 1)));
        assert!(!f.r(f.vertex(1, 1), f.vertex(2, 2)));
        assert!(f.s(f.vertex(1, 2), f.vertex(3, 1)));
        assert!(!f.s(f.vertex(3, 2), f.vertex(1, 1)));
        assert!(f.s(f.vertex(3, 2), 0));
        assert_eq!(OrderedFan::parse("2:3").unwrap(), f);
    }

    #[test]
    fn identity_is_epi_and_composes() {
        let f = OrderedFan::new(2, 2).unwrap();
        let id = FanMap::identity(f);
        check_epimorphism(&id).unwrap();
        assert_eq!(id.then(&id).unwrap(), id);
        assert_eq!(id.canonical(), "2:2->2:2:(1,2,3):[1,2];[1,2]");
    }

    #[test]
    fn collapsed_branch_keeps_boundaries_canonical() {
        let u = OrderedFan::new(1, 3).unwrap();
        let s = OrderedFan::new(1, 2).unwrap();
        let f = FanMap::from_steps(u, s, &[(1, vec![1]), (0, vec![]), (2, vec![1])]).unwrap();
        check_epimorphism(&f).unwrap();
        assert_eq!(f.boundaries(), vec![1, 3, 4]);
    }
}
