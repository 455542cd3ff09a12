use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use finram::bounds::{self, evaluate, parse_expr, Evaluated, ExactTable};
use finram::cache::{cache_key, Cache};
use finram::cert::{params, Certificate, Payload, TheoremId};
use finram::coloring::Oracle;
use finram::fans::{self, encode_epimorphism, FanMap, OrderedFan};
use finram::fin::{
    combined_span_d, enumerate_block_sequences, enumerate_elements, span_d, BlockSequence, FinElement, SpanSelector,
};
use finram::pipeline::{extract_witness, transcript_certificate, Mode, PipelineConfig, PipelineOutcome};
use finram::search::fanpair::{check_ramsey_pair, min_ramsey_witness, FanWitness};
use finram::search::gowers::{gowers_witness_certificate, min_gowers, verify_gowers};
use finram::search::mt::{min_milliken_taylor, verify_mt};
use finram::search::probe::{probe_neighbour_span, verify_neighbour};
use finram::search::ramsey::{min_classical_ramsey, verify_ramsey};
use finram::search::sizeins::{find_size_insensitive, min_size_insensitive, verify_size_insensitive, SizeParams};
use finram::search::typehom::{find_type_homogeneous, min_type_homogeneous, verify_type_homogeneous};
use finram::search::{Budget, Check, MinOutcome, SearchConfig};
use finram::types::{count_types, enumerate_tuple_types, map_tuple_type, type_of, type_of_tuple, TupleType};
use finram::verify::{check_witness_with, verify_certificate, Verdict, VerifyConfig};
use finram::{Error, Result};

use crate::args::*;

/// Verified, found or holds.
pub const OK: u8 = 0;
/// Counterexample, failed check or nothing found.
pub const NEGATIVE: u8 = 1;
/// Budget exceeded or verification left unchecked.
pub const BUDGET: u8 = 2;
pub const USAGE: u8 = 3;

struct Ctx {
    g: Global,
}

impl Ctx {
    fn search_config(&self) -> SearchConfig {
        let workers = if self.g.workers == 0 { SearchConfig::max_workers().workers } else { self.g.workers };
        SearchConfig { budget: Budget { max_nodes: self.g.budget_nodes, max_seconds: self.g.budget_seconds }, workers }
    }

    fn verify_config(&self) -> VerifyConfig {
        self.g.budget_nodes.map(|max_nodes| VerifyConfig { max_nodes }).unwrap_or_default()
    }

    fn oracle(&self) -> Result<Option<Oracle>> {
        self.g.coloring.as_deref().map(|spec| Oracle::from_spec(spec, self.g.colors)).transpose()
    }

    fn need_oracle(&self) -> Result<Oracle> {
        self.oracle()?.ok_or_else(|| usage("this command needs --coloring"))
    }

    fn colors(&self) -> Result<u8> {
        self.g.colors.filter(|&r| r >= 1).ok_or_else(|| usage("this command needs --colors r with r >= 1"))
    }

    fn cache(&self) -> Result<Option<Cache>> {
        self.g.cache.as_deref().map(Cache::open).transpose()
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.g.out {
            Some(path) => Ok(std::fs::write(path, format!("{text}\n"))?),
            None => match writeln!(std::io::stdout().lock(), "{text}") {
                // A closed pipe (`| head`) is the reader's choice, not a failure.
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(()),
            },
        }
    }

    fn emit_json(&self, v: &Value) -> Result<()> {
        self.emit(&serde_json::to_string_pretty(v)?)
    }

    fn emit_lines<I: IntoIterator<Item = String>>(&self, lines: I) -> Result<()> {
        self.emit(&lines.into_iter().collect::<Vec<_>>().join("\n"))
    }
}

fn usage(msg: &str) -> Error {
    Error::InvalidParameter(msg.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("documents serialize")
}

pub fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx { g: cli.global };
    match cli.command {
        Command::Enumerate { what } => enumerate(&ctx, what),
        Command::Span { sequence, selector, combined, dim } => {
            let b = BlockSequence::parse(&sequence)?;
            let items = match combined {
                Some(k) => combined_span_d(&b, k, dim)?,
                None => span_d(&b, &parse_selector(&selector, b.level())?, dim)?,
            };
            ctx.emit_lines(items.iter().map(BlockSequence::canonical))?;
            Ok(OK)
        }
        Command::Type { what } => type_cmd(&ctx, what),
        Command::Search { what } => search(&ctx, what),
        Command::Probe { what: ProbeWhat::Neighbour { shifts, m, at } } => neighbour(&ctx, &shifts, m, at),
        Command::Pipeline { what } => pipeline(&ctx, what),
        Command::Fans { what } => fans_cmd(&ctx, what),
        Command::Bounds { what } => bounds_cmd(&ctx, what),
        Command::Verify { file } => verify(&ctx, &file),
    }
}

fn parse_selector(text: &str, level: u8) -> Result<SpanSelector> {
    match text {
        "full" => Ok(SpanSelector::full(level)),
        "zero-one" => Ok(SpanSelector::zero_one(level)),
        _ => {
            let list = text.strip_prefix("neighbours:").ok_or_else(|| usage(&format!("unknown selector {text:?}")))?;
            let shifts = list
                .split(',')
                .map(|s| s.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad shift {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let sel = SpanSelector::neighbours(&shifts)?;
            if sel.level() != level {
                return Err(Error::LevelMismatch { expected: level, found: sel.level() });
            }
            Ok(sel)
        }
    }
}

fn enumerate(ctx: &Ctx, what: EnumerateWhat) -> Result<u8> {
    match what {
        EnumerateWhat::Elements { level, width, attain } => {
            ctx.emit_lines(enumerate_elements(level, width, attain)?.map(|e| e.canonical()))?
        }
        EnumerateWhat::Blocks { level, width, len } => {
            ctx.emit_lines(enumerate_block_sequences(level, width, len)?.iter().map(BlockSequence::canonical))?
        }
        EnumerateWhat::Types { level, max_len, dim } => {
            ctx.emit_lines(enumerate_tuple_types(level, max_len, dim).iter().map(TupleType::canonical))?
        }
    }
    Ok(OK)
}

fn type_cmd(ctx: &Ctx, what: TypeWhat) -> Result<u8> {
    match what {
        TypeWhat::Of { object } => {
            let (ty, base) = if object.contains(';') {
                let (t, b) = type_of_tuple(&BlockSequence::parse(&object)?)?;
                (t.canonical(), b)
            } else {
                let (t, b) = type_of(&FinElement::parse(&object)?)?;
                (t.canonical(), b)
            };
            ctx.emit_json(&json!({ "type": ty, "base": base.canonical() }))?;
        }
        TypeWhat::Count { level, max_len, dim } => ctx.emit(&count_types(level, max_len, dim).to_string())?,
        TypeWhat::Apply { phi, sequence } => {
            let image = map_tuple_type(&TupleType::parse(&phi)?, &BlockSequence::parse(&sequence)?)?;
            ctx.emit(&image.canonical())?;
        }
    }
    Ok(OK)
}

/// Emits a single-size check and maps it to an exit status.
fn report_check(ctx: &Ctx, check: Check) -> Result<u8> {
    match check {
        Check::Holds(cert) => {
            ctx.emit(&cert.to_json())?;
            Ok(OK)
        }
        Check::Fails(cert) => {
            ctx.emit(&cert.to_json())?;
            Ok(NEGATIVE)
        }
        Check::BudgetExceeded { nodes } => {
            ctx.emit_json(&json!({ "outcome": "budget-exceeded", "nodes": nodes }))?;
            Ok(BUDGET)
        }
    }
}

/// Looks the key up in the cache, otherwise searches and caches the
/// verified result.
fn report_min(ctx: &Ctx, key: String, search: impl FnOnce() -> Result<MinOutcome>) -> Result<u8> {
    let cache = ctx.cache()?;
    if let Some(entry) = cache.as_ref().map(|c| c.get(&key)).transpose()?.flatten() {
        ctx.emit_json(&json!({
            "key": key, "value": entry.value, "cached": true,
            "below": to_json(&entry.below), "at": to_json(&entry.at),
        }))?;
        return Ok(OK);
    }
    match search()? {
        MinOutcome::Exact(res) => {
            let stored = match &cache {
                Some(c) => c.put(&key, &res, &ctx.verify_config())?,
                None => false,
            };
            if cache.is_some() && !stored {
                eprintln!("warning: verification budget exhausted; {key} not cached");
            }
            ctx.emit_json(&json!({
                "key": key, "value": res.value, "cached": stored, "nodes": res.nodes,
                "below": to_json(&res.below), "at": to_json(&res.at),
            }))?;
            Ok(OK)
        }
        MinOutcome::BudgetExceeded { verified_below, nodes } => {
            ctx.emit_json(&json!({
                "key": key, "outcome": "budget-exceeded", "verified_below": verified_below, "nodes": nodes,
            }))?;
            Ok(BUDGET)
        }
    }
}

fn witness_cert(theorem: TheoremId, p: std::collections::BTreeMap<String, Value>, n: usize, witness: String, oracle: &Oracle) -> Certificate {
    let mut p = p;
    p.insert("r".into(), Value::from(oracle.colors()));
    Certificate::new(theorem, p, Payload::Witness { n, witness, coloring: oracle.spec().to_string() }).verified()
}

fn report_witness(ctx: &Ctx, cert: Option<Certificate>) -> Result<u8> {
    match cert {
        Some(c) => {
            ctx.emit(&c.to_json())?;
            Ok(OK)
        }
        None => {
            ctx.emit_json(&json!({ "outcome": "none" }))?;
            Ok(NEGATIVE)
        }
    }
}

fn join_list(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
}

fn search(ctx: &Ctx, what: SearchWhat) -> Result<u8> {
    let cfg = ctx.search_config();
    if let Some(oracle) = ctx.oracle()? {
        return witness_search(ctx, &oracle, what);
    }
    let r = ctx.colors()?;
    match what {
        SearchWhat::MinGowers { k, l, m, d, at } => match at.at {
            Some(n) => report_check(ctx, verify_gowers(k, l, m, d, r, n, &cfg)?),
            None => {
                let key = cache_key(
                    "gowers",
                    &[("k", k.to_string()), ("l", l.to_string()), ("m", m.to_string()), ("d", d.to_string()), ("r", r.to_string())],
                );
                report_min(ctx, key, || min_gowers(k, l, m, d, r, &cfg))
            }
        },
        SearchWhat::MinMt { d, m, at } => match at.at {
            Some(n) => report_check(ctx, verify_mt(d, m, r, n, &cfg)?),
            None => {
                let key = cache_key("mt", &[("d", d.to_string()), ("m", m.to_string()), ("r", r.to_string())]);
                report_min(ctx, key, || min_milliken_taylor(d, m, r, &cfg))
            }
        },
        SearchWhat::MinRamsey { k, l, at } => match at.at {
            Some(n) => report_check(ctx, verify_ramsey(k, l, r, n, &cfg)?),
            None => {
                let key = cache_key("ramsey", &[("k", k.to_string()), ("l", l.to_string()), ("r", r.to_string())]);
                report_min(ctx, key, || min_classical_ramsey(k, l, r, &cfg))
            }
        },
        SearchWhat::TypeHom { k, m, d, at } => match at.at {
            Some(n) => report_check(ctx, verify_type_homogeneous(k, m, d, r, n, &cfg)?),
            None => {
                let key =
                    cache_key("type-hom", &[("k", k.to_string()), ("m", m.to_string()), ("d", d.to_string()), ("r", r.to_string())]);
                report_min(ctx, key, || min_type_homogeneous(k, m, d, r, &cfg))
            }
        },
        SearchWhat::SizeInsens { k, l, d, at } => {
            let p = SizeParams::new(k, l, d)?;
            match at.at {
                Some(n) => report_check(ctx, verify_size_insensitive(&p, r, n, &cfg)?),
                None => {
                    let key = cache_key(
                        "size-insens",
                        &[("k", join_list(&p.k)), ("l", join_list(&p.l)), ("d", d.to_string()), ("r", r.to_string())],
                    );
                    report_min(ctx, key, || min_size_insensitive(&p, r, &cfg))
                }
            }
        }
    }
}

/// With a coloring, `search` looks for a witness at the given size.
fn witness_search(ctx: &Ctx, oracle: &Oracle, what: SearchWhat) -> Result<u8> {
    let need_n = |at: &At| at.at.ok_or_else(|| usage("a witness search needs --at n"));
    match what {
        SearchWhat::MinGowers { k, l, m, d, at } => {
            report_witness(ctx, gowers_witness_certificate(oracle, k, l, m, d, need_n(&at)?)?)
        }
        SearchWhat::TypeHom { k, m, d, at } => {
            let n = need_n(&at)?;
            let found = find_type_homogeneous(|t| oracle.color(t), k, m, d, n)?;
            report_witness(
                ctx,
                found.map(|(a, _)| witness_cert(TheoremId::TypeHom, params([("k", k as usize), ("m", m), ("d", d)]), n, a.canonical(), oracle)),
            )
        }
        SearchWhat::SizeInsens { k, l, d, at } => {
            let n = need_n(&at)?;
            let p = SizeParams::new(k, l, d)?;
            let found = find_size_insensitive(|t| oracle.color(t), &p, n)?;
            report_witness(
                ctx,
                found.map(|(sets, _)| {
                    let text = sets
                        .iter()
                        .map(|s| format!("{{{}}}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                        .collect::<Vec<_>>()
                        .join("|");
                    let mut ps = params([("d", d)]);
                    ps.insert("k".into(), Value::from(p.k.clone()));
                    ps.insert("l".into(), Value::from(p.l.clone()));
                    witness_cert(TheoremId::SizeInsens, ps, n, text, oracle)
                }),
            )
        }
        SearchWhat::MinMt { .. } | SearchWhat::MinRamsey { .. } => {
            Err(usage("Milliken-Taylor and classical Ramsey searches take no --coloring"))
        }
    }
}

fn neighbour(ctx: &Ctx, shifts: &[u8], m: usize, n: usize) -> Result<u8> {
    match ctx.oracle()? {
        Some(oracle) => {
            let found = probe_neighbour_span(|t| oracle.color(t), shifts, m, n)?;
            report_witness(
                ctx,
                found.map(|(b, c)| {
                    let mut p = params([("m", m)]);
                    p.insert("shifts".into(), shifts.iter().map(|&s| s as u64).collect::<Vec<_>>().into());
                    witness_cert(TheoremId::Neighbour, p, n, b.canonical(), &oracle).with_color(c)
                }),
            )
        }
        None => report_check(ctx, verify_neighbour(shifts, m, ctx.colors()?, n, &ctx.search_config())?),
    }
}

/// Exact values from `--table` and the cache, the table taking precedence.
fn exact_table(ctx: &Ctx, table: Option<&Path>) -> Result<ExactTable> {
    let mut out = match ctx.cache()? {
        Some(c) => c.exact_table()?,
        None => ExactTable::default(),
    };
    if let Some(path) = table {
        out.entries.extend(ExactTable::load(path)?.entries);
    }
    Ok(out)
}

fn pipeline(ctx: &Ctx, what: PipelineWhat) -> Result<u8> {
    let PipelineWhat::Extract { k, l, m, d, mode, max_width, table } = what;
    let oracle = ctx.need_oracle()?;
    let cfg = PipelineConfig {
        budget: ctx.search_config().budget,
        table: exact_table(ctx, table.as_deref())?,
        max_width,
    };
    let outcome = extract_witness(&oracle, k, l, m, d, Mode::parse(&mode)?, &cfg)?;
    match &outcome {
        PipelineOutcome::Found { .. } => {
            let cert = transcript_certificate(&oracle, &outcome).expect("found outcomes certify");
            ctx.emit(&cert.to_json())?;
            Ok(OK)
        }
        PipelineOutcome::NotFound { n, transcript } => {
            ctx.emit_json(&json!({ "outcome": "none", "n": n, "transcript": to_json(transcript) }))?;
            Ok(NEGATIVE)
        }
        PipelineOutcome::BudgetExceeded { transcript } => {
            ctx.emit_json(&json!({ "outcome": "budget-exceeded", "transcript": to_json(transcript) }))?;
            Ok(BUDGET)
        }
    }
}

fn fans_cmd(ctx: &Ctx, what: FansWhat) -> Result<u8> {
    let fan = |s: &str| OrderedFan::parse(s);
    match what {
        FansWhat::Epis { source, target, naive } => {
            let (b, a) = (fan(&source)?, fan(&target)?);
            let maps = if naive { fans::naive_epimorphisms(b, a) } else { fans::enumerate_epimorphisms(b, a) };
            let mut lines: Vec<String> = maps.iter().map(FanMap::canonical).collect();
            lines.sort();
            ctx.emit_lines(lines)?;
            Ok(if maps.is_empty() { NEGATIVE } else { OK })
        }
        FansWhat::Amalgamate { phi1, phi2 } => {
            let (d, psi1, psi2) = fans::amalgamate(&FanMap::parse(&phi1)?, &FanMap::parse(&phi2)?)?;
            ctx.emit_json(&json!({ "d": d.canonical(), "psi1": psi1.canonical(), "psi2": psi2.canonical() }))?;
            Ok(OK)
        }
        FansWhat::Jpp { a, b } => {
            let (c, ga, gb) = fans::joint_projection(fan(&a)?, fan(&b)?)?;
            ctx.emit_json(&json!({ "c": c.canonical(), "g_a": ga.canonical(), "g_b": gb.canonical() }))?;
            Ok(OK)
        }
        FansWhat::Encode { map } => {
            let e = encode_epimorphism(&FanMap::parse(&map)?)?;
            ctx.emit_json(&json!({ "star": e.star.canonical(), "sets": e.sets }))?;
            Ok(OK)
        }
        FansWhat::RamseyPair { s, t, u } => {
            report_check(ctx, check_ramsey_pair(fan(&s)?, fan(&t)?, fan(&u)?, ctx.colors()?, &ctx.search_config())?)
        }
        FansWhat::MinWitness { s, t } => match min_ramsey_witness(fan(&s)?, fan(&t)?, ctx.colors()?, &ctx.search_config())? {
            FanWitness::Found { fan, at, below, nodes } => {
                ctx.emit_json(&json!({
                    "fan": fan.canonical(), "nodes": nodes, "at": to_json(&at),
                    "below": below.iter().map(to_json).collect::<Vec<_>>(),
                }))?;
                Ok(OK)
            }
            FanWitness::BudgetExceeded { checked, nodes } => {
                ctx.emit_json(&json!({
                    "outcome": "budget-exceeded", "nodes": nodes,
                    "checked": checked.iter().map(|f| f.canonical()).collect::<Vec<_>>(),
                }))?;
                Ok(BUDGET)
            }
        },
    }
}

fn bounds_cmd(ctx: &Ctx, what: BoundsWhat) -> Result<u8> {
    let (expr, table) = match what {
        BoundsWhat::G { d, k, l, m, r, table } => (bounds::bound_g(d, k, l, m, r)?, table),
        BoundsWhat::T { d, k, m, r, table } => (bounds::bound_t(d, k, m, r)?, table),
        BoundsWhat::S { k, l, r, table } => (bounds::bound_s(&k, &l, r)?, table),
        BoundsWhat::Sd { k, l, d, r, table } => (bounds::bound_sd(&k, &l, d, r)?, table),
        BoundsWhat::Eval { expr, table } => (parse_expr(&expr)?, table),
    };
    let table = exact_table(ctx, table.table.as_deref())?;
    let doc = match evaluate(&expr, &table) {
        Evaluated::Exact(v) => json!({ "expr": expr.summary(), "full": expr.to_string(), "value": v.to_string() }),
        Evaluated::Symbolic(rest) => json!({
            "expr": expr.summary(), "full": expr.to_string(), "value": Value::Null, "residue": rest.to_string(),
        }),
    };
    ctx.emit_json(&doc)?;
    Ok(OK)
}

fn verify(ctx: &Ctx, file: &Path) -> Result<u8> {
    let cert = Certificate::load(file)?;
    let (verdict, warnings) = match ctx.oracle()? {
        // An explicit coloring replaces the recorded source of a witness.
        Some(oracle) if matches!(cert.payload, Payload::Witness { .. } | Payload::Chain { .. }) => {
            (check_witness_with(&cert, &oracle)?, Vec::new())
        }
        _ => {
            let report = verify_certificate(&cert, &ctx.verify_config())?;
            (report.verdict, report.warnings)
        }
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let (line, status) = match verdict {
        Verdict::Pass => ("pass".to_string(), OK),
        Verdict::Fail(why) => (format!("fail: {why}"), NEGATIVE),
        Verdict::Unchecked { nodes } => (format!("unchecked: budget exhausted after {nodes} nodes"), BUDGET),
    };
    ctx.emit(&line)?;
    Ok(status)
}
