//! Witness extraction by replaying the induction on `k`.
//!
//! Level 1 takes a Milliken-Taylor witness `A` and returns `b_s = l·χ(a_s)`.
//! Level `k >= 2` picks a type-homogeneous `A`, lays pyramids `C` of height
//! `l` over it, pulls the coloring back to `FIN_{k-1}^{[d]}(n')` through
//! `T_1(C)`, recurses at `(k-1, l-1)`, transfers the answer onto `T_1(C)`
//! and lifts it to `C` through term preimages.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{bound_g, evaluate, ExactTable};
use crate::cert::{params, Certificate, ColoredObject, Payload, TheoremId};
use crate::coloring::Oracle;
use crate::error::{Error, Result};
use crate::fin::{
    combined_span, combined_span_d, enumerate_block_sequences, span, span_monochromatic, t1_shift_terms,
    BlockSequence, FinElement, Shift, SpanQuery, SpanSelector,
};
use crate::pyramid::{followup_transfer, height_vector_tuple, make_pyramid_sequence, pyramids_over, PyramidSeq};
use crate::search::typehom::homogeneous_colors;
use crate::search::Budget;
use crate::types::{enumerate_tuple_types, type_of_tuple, TupleType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Sizes come from the evaluated upper bounds.
    ProofBounds,
    /// Sizes grow until the stage succeeds for the given coloring.
    Search,
}

impl Mode {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "proof-bounds" => Ok(Mode::ProofBounds),
            "search" => Ok(Mode::Search),
            _ => Err(Error::Parse(format!("unknown pipeline mode {text:?}"))),
        }
    }
}

/// One completed level of the induction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub k: u8,
    pub l: u8,
    /// Width of the level's domain.
    pub n: usize,
    /// Milliken-Taylor witness (level 1) or type-homogeneous sequence.
    pub a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pyramids: Option<String>,
    /// The pulled-back coloring of `FIN_{k-1}^{[d]}(n')`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub induced: Vec<ColoredObject>,
    /// Witness returned by the level below.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_witness: Option<String>,
    /// That witness moved onto `T_1(C)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transferred: Option<String>,
    pub witness: String,
    pub color: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineTranscript {
    pub mode: Mode,
    pub k: u8,
    pub l: u8,
    pub m: usize,
    pub d: usize,
    pub r: u8,
    /// Completed levels, deepest first.
    pub levels: Vec<LevelRecord>,
    /// Oracle queries plus candidate sequences examined.
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PipelineOutcome {
    Found { witness: BlockSequence, n: usize, color: u8, transcript: PipelineTranscript },
    /// Only in proof-bounds mode: the bounded size admitted no witness,
    /// which contradicts a table entry.
    NotFound { n: usize, transcript: PipelineTranscript },
    BudgetExceeded { transcript: PipelineTranscript },
}

struct Ctx<'a> {
    mode: Mode,
    m: usize,
    d: usize,
    r: u8,
    table: &'a ExactTable,
    budget: Budget,
    start: Instant,
    nodes: Cell<u64>,
    records: RefCell<Vec<LevelRecord>>,
}

impl Ctx<'_> {
    fn tick(&self) -> Result<()> {
        let n = self.nodes.get() + 1;
        self.nodes.set(n);
        if self.budget.max_nodes.is_some_and(|max| n > max)
            || self.budget.max_seconds.is_some_and(|s| self.start.elapsed().as_secs_f64() > s)
        {
            return Err(Error::BudgetExceeded { nodes: n });
        }
        Ok(())
    }

    fn bound(&self, k: u8, l: u8) -> Result<usize> {
        let e = bound_g(self.d, k as usize, l as usize, self.m, self.r as usize)?;
        match evaluate(&e, self.table) {
            crate::bounds::Evaluated::Exact(v) => {
                v.to_usize().ok_or_else(|| Error::InvalidParameter(format!("bound {v} is too large to search")))
            }
            crate::bounds::Evaluated::Symbolic(rest) => {
                Err(Error::InvalidParameter(format!("bound does not evaluate: {}", rest.summary())))
            }
        }
    }
}

type Color<'c> = dyn FnMut(&BlockSequence) -> Result<u8> + 'c;

/// Least block sequence of length `m` in `FIN_1(n)` with `FIN_1^{[d]}(A)`
/// monochromatic.
fn mt_witness(ctx: &Ctx<'_>, color: &mut Color<'_>, n: usize) -> Result<Option<(BlockSequence, u8)>> {
    for a in enumerate_block_sequences(1, n, ctx.m)? {
        ctx.tick()?;
        let found = span_monochromatic(&a, SpanQuery::Combined { k: 1 }, ctx.d, |t| color(t))?;
        if let Some(c) = found {
            return Ok(Some((a, c)));
        }
    }
    Ok(None)
}

/// Types of the tuples in the combined span of `count` pyramids.
fn span_types(k: u8, l: u8, count: usize, d: usize) -> Result<Vec<TupleType>> {
    let c = make_pyramid_sequence(l, count)?;
    let mut types = BTreeSet::new();
    for t in combined_span_d(c.sequence(), k, d)? {
        types.insert(type_of_tuple(&t)?.0);
    }
    Ok(types.into_iter().collect())
}

/// `c'(T_1 p) = c(p)` evaluated on the span of `T_1(C)` via term preimages.
struct Induced<'a> {
    c: &'a PyramidSeq,
    terms: crate::fin::SpanSet,
}

impl<'a> Induced<'a> {
    fn new(c: &'a PyramidSeq, shifted: &PyramidSeq, k: u8) -> Result<Self> {
        Ok(Induced { c, terms: combined_span(shifted.sequence(), k - 1)? })
    }

    fn preimage(&self, x: &FinElement) -> Result<FinElement> {
        let repr = self
            .terms
            .get(x)
            .ok_or_else(|| Error::CorruptTerm(format!("{x} is not in the shifted pyramid span")))?;
        t1_shift_terms(repr, Shift::Preimage(self.c.sequence()))?.evaluate()
    }

    fn preimage_tuple(&self, x: &BlockSequence) -> Result<BlockSequence> {
        BlockSequence::new(x.entries().iter().map(|e| self.preimage(e)).collect::<Result<Vec<_>>>()?)
    }
}

/// Equal heights of `T_1` images must carry equal colors on the combined span of `C`.
fn stage_sound(color: &mut Color<'_>, c: &PyramidSeq, shifted: &PyramidSeq, k: u8, d: usize) -> Result<bool> {
    let mut seen: HashMap<BlockSequence, u8> = HashMap::new();
    for p in combined_span_d(c.sequence(), k, d)? {
        let key = height_vector_tuple(shifted, &p.tetris1()?)?;
        let col = color(&p)?;
        if *seen.entry(key).or_insert(col) != col {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lifts `B'` in `<T_1(C)>_{P_{l-1}}` to `B` in `<C>_{P_l}` with `T_1(B) = B'`.
fn lift(b1: &BlockSequence, c: &PyramidSeq, shifted: &PyramidSeq) -> Result<BlockSequence> {
    let terms = span(shifted.sequence(), &SpanSelector::full(shifted.height()))?;
    let mut entries = Vec::with_capacity(b1.len());
    for e in b1.entries() {
        let repr = terms.get(e).ok_or_else(|| Error::CorruptTerm(format!("{e} is not in the span of T_1(C)")))?;
        entries.push(t1_shift_terms(repr, Shift::Preimage(c.sequence()))?.evaluate()?);
    }
    BlockSequence::new(entries)
}

/// A witness at width exactly `n`, or `None`.
fn level(ctx: &Ctx<'_>, color: &mut Color<'_>, k: u8, l: u8, n: usize) -> Result<Option<(BlockSequence, u8)>> {
    if k == 1 {
        let Some((a, col)) = mt_witness(ctx, color, n)? else {
            return Ok(None);
        };
        let entries = a
            .entries()
            .iter()
            .map(|e| FinElement::indicator(l, n, &e.support().collect::<Vec<_>>(), l))
            .collect();
        let b = BlockSequence::new(entries)?;
        ctx.records.borrow_mut().push(LevelRecord {
            k,
            l,
            n,
            a: a.canonical(),
            pyramids: None,
            induced: Vec::new(),
            sub_witness: None,
            transferred: None,
            witness: b.canonical(),
            color: col,
        });
        return Ok(Some((b, col)));
    }
    let run = 2 * l as usize - 1;
    let sub_sizes: Vec<usize> = match ctx.mode {
        Mode::Search => (ctx.m..=n / run).collect(),
        Mode::ProofBounds => vec![ctx.bound(k - 1, l - 1)?],
    };
    for sub_n in sub_sizes {
        let len = sub_n * run;
        if len > n {
            break;
        }
        let types = match ctx.mode {
            Mode::Search => span_types(k, l, sub_n, ctx.d)?,
            Mode::ProofBounds => enumerate_tuple_types(k, len, ctx.d),
        };
        for a in enumerate_block_sequences(1, n, len)? {
            ctx.tick()?;
            if homogeneous_colors(&mut *color, &a, &types)?.is_none() {
                continue;
            }
            let c = pyramids_over(l, &a)?;
            let shifted = c.tetris1()?;
            if !stage_sound(color, &c, &shifted, k, ctx.d)? {
                return Err(Error::InvalidParameter(format!(
                    "pulled-back coloring is not well defined over {}",
                    c.sequence().canonical()
                )));
            }
            let induced = Induced::new(&c, &shifted, k)?;
            let mut table: HashMap<BlockSequence, u8> = HashMap::new();
            let mut listing = Vec::new();
            for q in enumerate_block_sequences(k - 1, sub_n, ctx.d)? {
                let p = induced.preimage_tuple(&followup_transfer(&q, &shifted)?)?;
                let col = color(&p)?;
                listing.push(ColoredObject { object: q.canonical(), color: col });
                table.insert(q, col);
            }
            let depth = ctx.records.borrow().len();
            let mut sub_color = |q: &BlockSequence| -> Result<u8> {
                table.get(q).copied().ok_or_else(|| Error::Oracle {
                    object: q.canonical(),
                    reason: "outside the pulled-back domain".into(),
                })
            };
            let Some((b2, _)) = level(ctx, &mut sub_color, k - 1, l - 1, sub_n)? else {
                ctx.records.borrow_mut().truncate(depth);
                if ctx.mode == Mode::ProofBounds {
                    return Ok(None);
                }
                continue;
            };
            let b1 = followup_transfer(&b2, &shifted)?;
            let b = lift(&b1, &c, &shifted)?;
            let Some(col) = span_monochromatic(&b, SpanQuery::Combined { k }, ctx.d, |t| color(t))? else {
                return Err(Error::InvalidParameter(format!("lifted sequence {b} is not monochromatic")));
            };
            ctx.records.borrow_mut().push(LevelRecord {
                k,
                l,
                n,
                a: a.canonical(),
                pyramids: Some(c.sequence().canonical()),
                induced: listing,
                sub_witness: Some(b2.canonical()),
                transferred: Some(b1.canonical()),
                witness: b.canonical(),
                color: col,
            });
            return Ok(Some((b, col)));
        }
        if ctx.mode == Mode::ProofBounds {
            return Ok(None);
        }
    }
    Ok(None)
}

/// Extraction options beyond the theorem parameters.
#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub budget: Budget,
    /// Exact values for proof-bounds mode.
    pub table: ExactTable,
    /// Largest width tried in search mode.
    pub max_width: Option<usize>,
}

pub fn extract_witness(
    oracle: &Oracle,
    k: u8,
    l: u8,
    m: usize,
    d: usize,
    mode: Mode,
    cfg: &PipelineConfig,
) -> Result<PipelineOutcome> {
    crate::search::gowers::validate(k, l, m, d)?;
    let r = oracle.colors();
    let ctx = Ctx {
        mode,
        m,
        d,
        r,
        table: &cfg.table,
        budget: cfg.budget,
        start: Instant::now(),
        nodes: Cell::new(0),
        records: RefCell::new(Vec::new()),
    };
    let transcript = |ctx: &Ctx<'_>| PipelineTranscript {
        mode,
        k,
        l,
        m,
        d,
        r,
        levels: ctx.records.borrow().clone(),
        nodes: ctx.nodes.get(),
    };
    let mut color = |t: &BlockSequence| -> Result<u8> {
        ctx.tick()?;
        oracle.color(t)
    };
    let widths: Box<dyn Iterator<Item = usize>> = match mode {
        Mode::Search => Box::new(m..=cfg.max_width.unwrap_or(usize::MAX)),
        Mode::ProofBounds => Box::new(std::iter::once(ctx.bound(k, l)?)),
    };
    for n in widths {
        ctx.records.borrow_mut().clear();
        match level(&ctx, &mut color, k, l, n) {
            Ok(Some((witness, col))) => {
                return Ok(PipelineOutcome::Found { witness, n, color: col, transcript: transcript(&ctx) });
            }
            Ok(None) if mode == Mode::ProofBounds => {
                return Ok(PipelineOutcome::NotFound { n, transcript: transcript(&ctx) });
            }
            Ok(None) => {}
            Err(Error::BudgetExceeded { .. }) => {
                return Ok(PipelineOutcome::BudgetExceeded { transcript: transcript(&ctx) });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(PipelineOutcome::NotFound { n: cfg.max_width.unwrap_or(m), transcript: transcript(&ctx) })
}

/// The transcript as a certificate whose stages are the level records.
pub fn transcript_certificate(oracle: &Oracle, outcome: &PipelineOutcome) -> Option<Certificate> {
    let PipelineOutcome::Found { witness, n, color, transcript } = outcome else {
        return None;
    };
    let mut p = params([("k", transcript.k as usize), ("l", transcript.l as usize), ("m", transcript.m), ("d", transcript.d)]);
    p.insert("r".into(), Value::from(transcript.r));
    p.insert("mode".into(), serde_json::to_value(transcript.mode).expect("mode serializes"));
    let stages = transcript.levels.iter().map(|rec| serde_json::to_value(rec).expect("record serializes")).collect();
    Some(
        Certificate::new(
            TheoremId::Pipeline,
            p,
            Payload::Chain { n: *n, witness: witness.canonical(), coloring: oracle.spec().to_string(), stages },
        )
        .with_color(*color)
        .verified(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{Builtin, ColorTable};

    fn found(o: PipelineOutcome) -> (BlockSequence, usize, PipelineTranscript) {
        match o {
            PipelineOutcome::Found { witness, n, transcript, .. } => (witness, n, transcript),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn base_cases() {
        let oracle = Oracle::builtin(Builtin::SuppParity);
        let cfg = PipelineConfig::default();
        let (b, n, t) = found(extract_witness(&oracle, 1, 1, 1, 1, Mode::Search, &cfg).unwrap());
        assert_eq!((b.canonical().as_str(), n, t.levels.len()), ("1:1:[1]", 1, 1));
        let (b, _, _) = found(extract_witness(&oracle, 1, 2, 1, 1, Mode::Search, &cfg).unwrap());
        assert_eq!(b.canonical(), "2:1:[2]");

        let mut table = ExactTable::default();
        table.insert("MT(1,1,2)".into(), 1, "test".into());
        let cfg = PipelineConfig { table, ..Default::default() };
        let (b, n, t) = found(extract_witness(&oracle, 1, 1, 1, 1, Mode::ProofBounds, &cfg).unwrap());
        assert_eq!((b.canonical().as_str(), n, t.mode), ("1:1:[1]", 1, Mode::ProofBounds));
        assert!(extract_witness(&oracle, 2, 2, 1, 1, Mode::ProofBounds, &cfg).is_err());
    }

    #[test]
    fn two_levels_on_random_tables() {
        for seed in 0..5 {
            let oracle = Oracle::table(ColorTable::seeded(2, seed), &format!("seed-{seed}"));
            let out = extract_witness(&oracle, 2, 2, 1, 1, Mode::Search, &PipelineConfig::default()).unwrap();
            let (b, _, t) = found(out.clone());
            assert_eq!(t.levels.len(), 2);
            assert!(span_monochromatic(&b, SpanQuery::Combined { k: 2 }, 1, |x| oracle.color(x)).unwrap().is_some());
            let again = extract_witness(&oracle, 2, 2, 1, 1, Mode::Search, &PipelineConfig::default()).unwrap();
            assert_eq!(out, again);
            assert!(transcript_certificate(&oracle, &out).is_some());
        }
    }

    #[test]
    fn longer_witness() {
        let oracle = Oracle::builtin(Builtin::Const(1));
        let (b, _, t) = found(extract_witness(&oracle, 2, 3, 2, 1, Mode::Search, &PipelineConfig::default()).unwrap());
        assert_eq!(b.len(), 2);
        assert_eq!(b.level(), 3);
        assert_eq!(t.levels.len(), 2);
    }

    #[test]
    fn budget_is_reported() {
        let oracle = Oracle::table(ColorTable::seeded(2, 7), "seed-7");
        let cfg = PipelineConfig { budget: Budget::nodes(3), ..Default::default() };
        assert!(matches!(
            extract_witness(&oracle, 2, 2, 1, 1, Mode::Search, &cfg).unwrap(),
            PipelineOutcome::BudgetExceeded { .. }
        ));
    }
}
