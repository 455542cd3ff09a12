//! Spans `<B>_I` and combined spans over `P_k` and `P_{k+1}^l`.

use std::collections::BTreeMap;

use super::block::BlockSequence;
use super::element::FinElement;
use super::opvec::{all_full, OpKind, OpVector, ValueMap};
use super::term::TermRepr;
use crate::error::{Error, Result};

/// A set `I` of vectors of P_k containing the all-zero vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanSelector {
    k: u8,
    vectors: Vec<OpVector>,
}

impl SpanSelector {
    pub fn new(k: u8, mut vectors: Vec<OpVector>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter("selector level must be >= 1".into()));
        }
        for v in &vectors {
            if v.kind() != OpKind::Full || v.input_level() != k {
                return Err(Error::InvalidParameter(format!("{v:?} is not a vector of P_{k}")));
            }
        }
        if !vectors.iter().any(|v| v.is_zero()) {
            return Err(Error::InvalidParameter("selector must contain the all-zero vector".into()));
        }
        vectors.sort();
        vectors.dedup();
        Ok(SpanSelector { k, vectors })
    }

    /// All of P_k.
    pub fn full(k: u8) -> Self {
        SpanSelector { k, vectors: all_full(k) }
    }

    /// `prod_{j=1}^k {0,1}` (the original Gowers selector).
    pub fn zero_one(k: u8) -> Self {
        let vectors = all_full(k).into_iter().filter(|v| v.coords().iter().all(|&c| c <= 1)).collect();
        SpanSelector { k, vectors }
    }

    /// `prod_j I_j` with `I_j = {0, l_j, l_j + 1}` for `l_j` in `0..j`.
    pub fn neighbours(shifts: &[u8]) -> Result<Self> {
        let k = shifts.len() as u8;
        for (idx, &s) in shifts.iter().enumerate() {
            if s as usize > idx {
                return Err(Error::InvalidParameter(format!("l_{} = {s} must be below {}", idx + 1, idx + 1)));
            }
        }
        let vectors = all_full(k)
            .into_iter()
            .filter(|v| v.coords().iter().zip(shifts).all(|(&c, &s)| c == 0 || c == s || c == s + 1))
            .collect();
        SpanSelector::new(k, vectors)
    }

    pub fn level(&self) -> u8 {
        self.k
    }

    pub fn vectors(&self) -> &[OpVector] {
        &self.vectors
    }

    fn maps(&self) -> Vec<ValueMap> {
        let mut maps: Vec<ValueMap> = self.vectors.iter().map(|v| v.value_map()).collect();
        maps.sort_by(|a, b| b.output_level().cmp(&a.output_level()).then_with(|| a.cmp(b)));
        maps.dedup();
        maps
    }
}

/// Span elements keyed by value, each with the least term representation producing it.
pub type SpanSet = BTreeMap<FinElement, TermRepr>;

/// `<B>_I`: sums over nonempty subsequences of `B` of `T_i(b)` with `i` in
/// `I`, at least one summand untouched. Vanishing summands count as omitted.
pub fn span(b: &BlockSequence, selector: &SpanSelector) -> Result<SpanSet> {
    if selector.level() != b.level() {
        return Err(Error::LevelMismatch { expected: b.level(), found: selector.level() });
    }
    Ok(assemble(b, b.level(), &selector.maps()))
}

/// `<U_{i in P_{k+1}^l} T_i(B)>_{P_k}` for `B` of level `l >= k`.
pub fn combined_span(b: &BlockSequence, k: u8) -> Result<SpanSet> {
    let l = b.level();
    if k > l || k < 1 {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= l (k={k}, l={l})")));
    }
    Ok(assemble(b, k, &ValueMap::all_onto_at_most(l, k)))
}

/// Length-`d` block sequences drawn from the combined span, in canonical order.
pub fn combined_span_d(b: &BlockSequence, k: u8, d: usize) -> Result<Vec<BlockSequence>> {
    if d < 1 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let set = combined_span(b, k)?;
    Ok(block_tuples(set.keys(), d))
}

/// Length-`d` block sequences drawn from `<B>_I`.
pub fn span_d(b: &BlockSequence, selector: &SpanSelector, d: usize) -> Result<Vec<BlockSequence>> {
    if d < 1 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let set = span(b, selector)?;
    Ok(block_tuples(set.keys(), d))
}

/// All length-`d` block-ordered tuples from a set of nonzero elements.
pub fn block_tuples<'a>(elements: impl Iterator<Item = &'a FinElement>, d: usize) -> Vec<BlockSequence> {
    let mut items: Vec<&FinElement> = elements.collect();
    items.sort();
    let mut out = Vec::new();
    let mut prefix: Vec<FinElement> = Vec::with_capacity(d);
    fn rec(items: &[&FinElement], d: usize, prefix: &mut Vec<FinElement>, out: &mut Vec<BlockSequence>) {
        if prefix.len() == d {
            out.push(BlockSequence::from_raw(prefix.clone()));
            return;
        }
        let floor = prefix.last().and_then(|e| e.max_support());
        for &e in items {
            if floor.is_some_and(|hi| e.min_support().is_some_and(|lo| lo <= hi)) {
                continue;
            }
            prefix.push(e.clone());
            rec(items, d, prefix, out);
            prefix.pop();
        }
    }
    rec(&items, d, &mut prefix, &mut out);
    out.sort();
    out
}

fn assemble(b: &BlockSequence, k: u8, maps: &[ValueMap]) -> SpanSet {
    // Distinct nonzero images per entry, with the least map producing each.
    let images: Vec<Vec<(FinElement, &ValueMap)>> = b
        .entries()
        .iter()
        .map(|e| {
            let mut seen: BTreeMap<FinElement, &ValueMap> = BTreeMap::new();
            for m in maps {
                if m.output_level() == 0 {
                    continue;
                }
                let img = m.apply(e).with_level(k).expect("images stay below k");
                seen.entry(img).or_insert(m);
            }
            seen.into_iter().collect()
        })
        .collect();

    let mut out = SpanSet::new();
    let mut chosen: Vec<(usize, &ValueMap)> = Vec::new();
    let width = b.width();
    fn rec<'m>(
        s: usize,
        acc: FinElement,
        top: bool,
        images: &'m [Vec<(FinElement, &'m ValueMap)>],
        chosen: &mut Vec<(usize, &'m ValueMap)>,
        b: &BlockSequence,
        k: u8,
        out: &mut SpanSet,
    ) {
        if s == images.len() {
            if top {
                let repr = TermRepr::from_maps(b.clone(), k, chosen);
                match out.get(&acc) {
                    Some(existing) if *existing <= repr => {}
                    _ => {
                        out.insert(acc, repr);
                    }
                }
            }
            return;
        }
        rec(s + 1, acc.clone(), top, images, chosen, b, k, out);
        for (img, map) in &images[s] {
            chosen.push((s, map));
            let next = acc.add_disjoint(img);
            rec(s + 1, next, top || img.max_value() == k, images, chosen, b, k, out);
            chosen.pop();
        }
    }
    rec(0, FinElement::zero(k, width), false, &images, &mut chosen, b, k, &mut out);
    out
}

/// The unique color of a set of colored objects, or `None` when two differ.
pub fn monochromatic<T, F>(items: impl IntoIterator<Item = T>, mut color: F) -> Result<Option<u8>>
where
    F: FnMut(&T) -> Result<u8>,
{
    let mut seen: Option<u8> = None;
    for x in items {
        let c = color(&x)?;
        match seen {
            None => seen = Some(c),
            Some(prev) if prev != c => return Ok(None),
            _ => {}
        }
    }
    Ok(seen)
}

/// Which span a monochromaticity question is asked about.
#[derive(Debug, Clone)]
pub enum SpanQuery<'a> {
    /// `<B>_I^{[d]}`.
    Selector(&'a SpanSelector),
    /// `<U T_i(B)>_{P_k}^{[d]}`.
    Combined { k: u8 },
}

/// Colors every length-`d` tuple of the requested span of `B`; returns the
/// common color or `None`. One entry point for all the span theorems.
pub fn span_monochromatic<F>(b: &BlockSequence, query: SpanQuery<'_>, d: usize, color: F) -> Result<Option<u8>>
where
    F: FnMut(&BlockSequence) -> Result<u8>,
{
    let tuples = match query {
        SpanQuery::Selector(sel) => span_d(b, sel, d)?,
        SpanQuery::Combined { k } => combined_span_d(b, k, d)?,
    };
    let mut color = color;
    monochromatic(tuples, |t| color(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fin::block::enumerate_block_sequences;
    use crate::fin::opvec::all_upper;

    fn el(k: u8, v: &[u32]) -> FinElement {
        FinElement::new(k, v.len(), v).unwrap()
    }

    fn bs(entries: &[FinElement]) -> BlockSequence {
        BlockSequence::new(entries.to_vec()).unwrap()
    }

    fn values(set: &SpanSet) -> Vec<Vec<u8>> {
        set.keys().map(|e| e.values().to_vec()).collect()
    }

    /// Independent span oracle: every assignment of a vector of `I` (or
    /// omission) to every entry, summed directly.
    fn oracle_span(b: &BlockSequence, vectors: &[OpVector]) -> Vec<Vec<u8>> {
        let m = b.len();
        let mut out = std::collections::BTreeSet::new();
        let choices = vectors.len() + 1;
        let total = choices.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let mut sum = vec![0u8; b.width()];
            let mut untouched = false;
            for entry in b.entries() {
                let pick = c % choices;
                c /= choices;
                if pick == 0 {
                    continue;
                }
                let v = &vectors[pick - 1];
                untouched |= v.is_zero();
                let img = v.apply(entry).unwrap();
                for (s, x) in sum.iter_mut().zip(img.values()) {
                    *s += x;
                }
            }
            if untouched {
                out.insert(sum);
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn span_examples() {
        let b = bs(&[el(1, &[1, 0, 0]), el(1, &[0, 0, 1])]);
        assert_eq!(values(&span(&b, &SpanSelector::full(1)).unwrap()), vec![vec![0, 0, 1], vec![1, 0, 0], vec![1, 0, 1]]);
        let b = bs(&[el(2, &[2, 0]), el(2, &[0, 2])]);
        let got = values(&span(&b, &SpanSelector::full(2)).unwrap());
        assert_eq!(got, vec![vec![0, 2], vec![1, 2], vec![2, 0], vec![2, 1], vec![2, 2]]);
        let b = bs(&[el(2, &[2])]);
        assert_eq!(values(&span(&b, &SpanSelector::full(2)).unwrap()), vec![vec![2]]);
        assert!(span(&b, &SpanSelector::full(1)).is_err());
    }

    #[test]
    fn span_matches_oracle() {
        for k in 1..=3u8 {
            for b in enumerate_block_sequences(k, 4, 2).unwrap().into_iter().step_by(7) {
                for sel in [SpanSelector::full(k), SpanSelector::zero_one(k)] {
                    let got = values(&span(&b, &sel).unwrap());
                    assert_eq!(got, oracle_span(&b, sel.vectors()), "B={b}");
                }
            }
        }
    }

    #[test]
    fn combined_span_examples() {
        let b = bs(&[el(1, &[1, 0]), el(1, &[0, 1])]);
        let set = combined_span(&b, 1).unwrap();
        assert_eq!(values(&set), vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(combined_span_d(&b, 1, 1).unwrap().len(), 3);

        let b = bs(&[el(2, &[2])]);
        assert_eq!(values(&combined_span(&b, 1).unwrap()), vec![vec![1]]);
        assert!(combined_span(&b, 3).is_err());
    }

    #[test]
    fn combined_span_pairs_oracle() {
        let b = bs(&[el(2, &[2, 0]), el(2, &[0, 2])]);
        let pairs = combined_span_d(&b, 2, 2).unwrap();
        // Only block-ordered pairs of attaining span elements: ([2,0],[0,2]).
        assert_eq!(pairs, vec![bs(&[el(2, &[2, 0]), el(2, &[0, 2])])]);
    }

    /// Direct oracle for the combined span: every (t, i) assignment.
    fn oracle_combined(b: &BlockSequence, k: u8) -> Vec<Vec<u8>> {
        let l = b.level();
        let mut pairs = Vec::new();
        for t in all_full(k) {
            for i in all_upper(k, l) {
                pairs.push((t.clone(), i));
            }
        }
        let choices = pairs.len() + 1;
        let mut out = std::collections::BTreeSet::new();
        let total = choices.pow(b.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut sum = vec![0u8; b.width()];
            let mut untouched = false;
            for entry in b.entries() {
                let pick = c % choices;
                c /= choices;
                if pick == 0 {
                    continue;
                }
                let (t, i) = &pairs[pick - 1];
                untouched |= t.is_zero();
                let img = t.apply(&i.apply(entry).unwrap()).unwrap();
                for (s, x) in sum.iter_mut().zip(img.values()) {
                    *s += x;
                }
            }
            if untouched {
                out.insert(sum);
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn combined_span_matches_oracle() {
        for (l, k) in [(2u8, 1u8), (2, 2), (3, 2), (3, 1)] {
            for b in enumerate_block_sequences(l, 3, 2).unwrap().into_iter().step_by(5) {
                assert_eq!(values(&combined_span(&b, k).unwrap()), oracle_combined(&b, k), "B={b} k={k}");
            }
        }
    }

    #[test]
    fn combined_with_equal_levels_is_plain_span() {
        for k in 1..=3u8 {
            for b in enumerate_block_sequences(k, 4, 2).unwrap().into_iter().step_by(11) {
                let a: Vec<_> = combined_span(&b, k).unwrap().into_keys().collect();
                let c: Vec<_> = span(&b, &SpanSelector::full(k)).unwrap().into_keys().collect();
                assert_eq!(a, c);
            }
        }
    }

    #[test]
    fn span_closure_and_provenance() {
        for b in enumerate_block_sequences(3, 4, 2).unwrap().into_iter().step_by(13) {
            for (e, repr) in combined_span(&b, 2).unwrap() {
                assert!(e.attains());
                assert_eq!(repr.evaluate().unwrap(), e);
                let union: Vec<usize> = b.entries().iter().flat_map(|x| x.support()).collect();
                assert!(e.support().all(|x| union.contains(&x)));
            }
        }
    }

    #[test]
    fn monochromatic_examples() {
        let b = bs(&[el(1, &[1, 0]), el(1, &[0, 1])]);
        let parity = |t: &BlockSequence| Ok(1 + (t.entries()[0].support_size() % 2) as u8);
        assert_eq!(span_monochromatic(&b, SpanQuery::Selector(&SpanSelector::full(1)), 1, parity).unwrap(), None);
        assert_eq!(span_monochromatic(&b, SpanQuery::Combined { k: 1 }, 1, |_| Ok(3)).unwrap(), Some(3));
        let single = bs(&[el(2, &[0, 2, 1])]);
        assert_eq!(span_monochromatic(&single, SpanQuery::Combined { k: 2 }, 1, |_| Ok(2)).unwrap(), Some(2));
        let failing = span_monochromatic(&b, SpanQuery::Combined { k: 1 }, 1, |t| {
            Err(Error::Oracle { object: t.canonical(), reason: "boom".into() })
        });
        assert!(matches!(failing, Err(Error::Oracle { .. })));
    }

    #[test]
    fn neighbour_selector() {
        let sel = SpanSelector::neighbours(&[0]).unwrap();
        assert_eq!(sel.vectors().len(), 2);
        assert!(SpanSelector::neighbours(&[1]).is_err());
        assert!(SpanSelector::new(2, vec![OpVector::full(vec![1, 1]).unwrap()]).is_err());
    }
}
