//! Certificate checking that rebuilds every claim from the combinatorial
//! primitives alone. Nothing here calls into the search code.

use std::collections::{BTreeMap, HashMap};

use crate::cert::{Certificate, Payload, Status, TheoremId, TOOL_VERSION};
use crate::coloring::{Colorable, Oracle};
use crate::error::{Error, Result};
use crate::fans::{naive_epimorphisms, OrderedFan};
use crate::fin::{
    combined_span_d, enumerate_block_sequences, span_d, BlockSequence, FinElement, SpanSelector,
};
use crate::pyramid::{followup_transfer, pyramids_over};
use crate::types::type_of_tuple;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// The first violated clause.
    Fail(String),
    /// The exhaustive re-check ran out of nodes.
    Unchecked { nodes: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub verdict: Verdict,
    pub warnings: Vec<String>,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_nodes: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_nodes: 200_000_000 }
    }
}

/// Points and witness candidates of one statement at one size. A candidate
/// is a witness for a coloring when each of its classes is monochromatic.
struct Domain {
    objects: Vec<String>,
    candidates: Vec<(String, Vec<Vec<usize>>)>,
}

impl Domain {
    fn build(objects: Vec<String>, candidates: impl IntoIterator<Item = (String, Vec<Vec<String>>)>) -> Result<Self> {
        let index: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let mut out = Vec::new();
        for (name, classes) in candidates {
            let mut idx = Vec::with_capacity(classes.len());
            for class in classes {
                let ids = class
                    .iter()
                    .map(|o| {
                        index
                            .get(o.as_str())
                            .copied()
                            .ok_or_else(|| Error::InvalidParameter(format!("{o} is outside the rebuilt domain")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                idx.push(ids);
            }
            out.push((name, idx));
        }
        Ok(Domain { objects, candidates: out })
    }
}

fn by_position(mut objects: Vec<(usize, String)>) -> Vec<String> {
    objects.sort();
    objects.dedup();
    objects.into_iter().map(|(_, s)| s).collect()
}

fn last_position(b: &BlockSequence) -> usize {
    b.entries().last().and_then(|e| e.max_support()).unwrap_or(0)
}

fn block_domain(level: u8, n: usize, d: usize) -> Result<Vec<String>> {
    Ok(by_position(enumerate_block_sequences(level, n, d)?.iter().map(|b| (last_position(b), b.canonical())).collect()))
}

fn canon_all(v: &[BlockSequence]) -> Vec<String> {
    v.iter().map(BlockSequence::canonical).collect()
}

fn gowers_domain(k: u8, l: u8, m: usize, d: usize, n: usize) -> Result<Domain> {
    let mut cands = Vec::new();
    for b in enumerate_block_sequences(l, n, m)? {
        cands.push((b.canonical(), vec![canon_all(&combined_span_d(&b, k, d)?)]));
    }
    Domain::build(block_domain(k, n, d)?, cands)
}

fn neighbour_domain(shifts: &[u8], m: usize, n: usize) -> Result<Domain> {
    let sel = SpanSelector::neighbours(shifts)?;
    let mut cands = Vec::new();
    for b in enumerate_block_sequences(sel.level(), n, m)? {
        cands.push((b.canonical(), vec![canon_all(&span_d(&b, &sel, 1)?)]));
    }
    Domain::build(block_domain(sel.level(), n, 1)?, cands)
}

/// `FIN_1^{[d]}(A)` for every `A` of length `m`, via unions of blocks.
fn mt_domain(d: usize, m: usize, n: usize) -> Result<Domain> {
    let mut cands = Vec::new();
    for a in enumerate_block_sequences(1, n, m)? {
        let mut class = Vec::new();
        for pat in enumerate_block_sequences(1, m, d)? {
            let entries = pat
                .entries()
                .iter()
                .map(|sel| {
                    let pos: Vec<usize> = sel.support().flat_map(|j| a.entries()[j].support()).collect();
                    FinElement::indicator(1, n, &pos, 1)
                })
                .collect();
            class.push(BlockSequence::new(entries)?.canonical());
        }
        cands.push((a.canonical(), vec![class]));
    }
    Domain::build(block_domain(1, n, d)?, cands)
}

fn subsets(ground: &[usize], j: usize) -> Vec<Vec<usize>> {
    if j == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in ground.iter().enumerate() {
        for mut rest in subsets(&ground[i + 1..], j - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn set_text(s: &[usize]) -> String {
    format!("{{{}}}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn ramsey_domain(k: usize, l: usize, n: usize) -> Result<Domain> {
    let ground: Vec<usize> = (1..=n).collect();
    let objects = by_position(subsets(&ground, k).iter().map(|s| (s.last().copied().unwrap_or(0), set_text(s))).collect());
    let cands = subsets(&ground, l).into_iter().map(|x| {
        let class = subsets(&x, k).iter().map(|s| set_text(s)).collect();
        (set_text(&x), vec![class])
    });
    Domain::build(objects, cands)
}

/// Elements of `FIN_k^{[d]}(n)` constant on the blocks of `a`, grouped by type.
fn type_classes(a: &BlockSequence, all: &[BlockSequence]) -> Result<Vec<Vec<String>>> {
    let mut classes: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for p in all.iter().filter(|p| p.lies_in(a)) {
        classes.entry(type_of_tuple(p)?.0.canonical()).or_default().push(p.canonical());
    }
    Ok(classes.into_values().collect())
}

fn type_hom_domain(k: u8, m: usize, d: usize, n: usize) -> Result<Domain> {
    let all = enumerate_block_sequences(k, n, d)?;
    let mut cands = Vec::new();
    for a in enumerate_block_sequences(1, n, m)? {
        cands.push((a.canonical(), type_classes(&a, &all)?));
    }
    Domain::build(block_domain(k, n, d)?, cands)
}

/// A point of the size-insensitivity statements: `d` tuples of `m` sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Sets(Vec<Vec<Vec<usize>>>);

impl Colorable for Sets {
    fn canonical(&self) -> String {
        self.0
            .iter()
            .map(|p| p.iter().map(|s| set_text(s)).collect::<Vec<_>>().join("|"))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn cardinality(&self) -> Option<usize> {
        Some(self.0.iter().flatten().map(Vec::len).sum())
    }

    fn support_size(&self) -> Option<usize> {
        self.cardinality()
    }

    fn max_position(&self) -> Option<usize> {
        self.0.iter().flatten().flatten().max().copied()
    }
}

fn sets_inside(within: &[Vec<usize>], k: &[usize], d: usize) -> Vec<Sets> {
    let mut singles: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for (set, &ki) in within.iter().zip(k) {
        let choices: Vec<Vec<usize>> = (0..=ki.min(set.len())).flat_map(|j| subsets(set, j)).collect();
        singles = singles
            .into_iter()
            .flat_map(|pre| {
                choices.iter().map(move |c| {
                    let mut p = pre.clone();
                    p.push(c.clone());
                    p
                })
            })
            .collect();
    }
    if d == 1 {
        return singles.into_iter().map(|t| Sets(vec![t])).collect();
    }
    let occupied = |t: &Vec<Vec<usize>>| -> Vec<usize> { (0..t.len()).filter(|&i| !t[i].is_empty()).collect() };
    let singles: Vec<_> = singles.into_iter().filter(|t| !occupied(t).is_empty()).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Vec<Vec<usize>>>, usize)> = vec![(Vec::new(), 0)];
    while let Some((cur, lo)) = stack.pop() {
        if cur.len() == d {
            out.push(Sets(cur));
            continue;
        }
        for t in &singles {
            let occ = occupied(t);
            if occ[0] >= lo {
                let mut next = cur.clone();
                next.push(t.clone());
                stack.push((next, occ[occ.len() - 1] + 1));
            }
        }
    }
    out.sort();
    out
}

fn size_key(s: &Sets) -> Vec<Vec<usize>> {
    s.0.iter().map(|p| p.iter().map(Vec::len).collect()).collect()
}

fn size_classes(b: &[Vec<usize>], k: &[usize], d: usize) -> Vec<Vec<String>> {
    let mut classes: BTreeMap<Vec<Vec<usize>>, Vec<String>> = BTreeMap::new();
    for s in sets_inside(b, k, d) {
        classes.entry(size_key(&s)).or_default().push(s.canonical());
    }
    classes.into_values().collect()
}

fn size_domain(k: &[usize], l: &[usize], d: usize, n: usize) -> Result<Domain> {
    let ground: Vec<usize> = (1..=n).collect();
    let objects = by_position(
        sets_inside(&vec![ground.clone(); k.len()], k, d)
            .iter()
            .map(|s| (s.max_position().unwrap_or(0), s.canonical()))
            .collect(),
    );
    let mut witnesses: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for &li in l {
        let choices = subsets(&ground, li);
        witnesses = witnesses
            .into_iter()
            .flat_map(|pre| {
                choices.iter().map(move |c| {
                    let mut q = pre.clone();
                    q.push(c.clone());
                    q
                })
            })
            .collect();
    }
    let cands = witnesses.into_iter().map(|b| {
        let name = b.iter().map(|s| set_text(s)).collect::<Vec<_>>().join("|");
        (name, size_classes(&b, k, d))
    });
    Domain::build(objects, cands)
}

fn pair_domain(s: OrderedFan, t: OrderedFan, u: OrderedFan) -> Result<Domain> {
    let objects: Vec<String> = naive_epimorphisms(u, s).iter().map(|f| f.canonical()).collect();
    let inner = naive_epimorphisms(t, s);
    let mut cands = Vec::new();
    for g in naive_epimorphisms(u, t) {
        let class = inner.iter().map(|h| g.then(h).map(|f| f.canonical())).collect::<Result<Vec<_>>>()?;
        cands.push((g.canonical(), vec![class]));
    }
    Domain::build(objects, cands)
}

fn param_u8(cert: &Certificate, name: &str) -> Result<u8> {
    let v = cert.param(name)?;
    u8::try_from(v).map_err(|_| Error::Parse(format!("parameter {name}={v} is too large")))
}

fn fan_param(cert: &Certificate, name: &str) -> Result<OrderedFan> {
    OrderedFan::parse(&cert.param_str(name)?)
}

fn rebuild(cert: &Certificate, n: usize) -> Result<Domain> {
    match cert.theorem {
        TheoremId::Gowers => gowers_domain(
            param_u8(cert, "k")?,
            param_u8(cert, "l")?,
            cert.param("m")?,
            cert.param("d")?,
            n,
        ),
        TheoremId::Mt => mt_domain(cert.param("d")?, cert.param("m")?, n),
        TheoremId::Ramsey => ramsey_domain(cert.param("k")?, cert.param("l")?, n),
        TheoremId::TypeHom => type_hom_domain(param_u8(cert, "k")?, cert.param("m")?, cert.param("d")?, n),
        TheoremId::SizeInsens => {
            size_domain(&cert.param_list("k")?, &cert.param_list("l")?, cert.param("d")?, n)
        }
        TheoremId::RamseyPair => pair_domain(fan_param(cert, "S")?, fan_param(cert, "T")?, fan_param(cert, "U")?),
        TheoremId::Neighbour => {
            let shifts = cert.param_list("shifts")?.into_iter().map(|s| s as u8).collect::<Vec<_>>();
            neighbour_domain(&shifts, cert.param("m")?, n)
        }
        TheoremId::Pipeline => Err(Error::InvalidParameter("pipeline certificates carry witnesses only".into())),
    }
}

fn mono(classes: &[Vec<usize>], colors: &[u8]) -> bool {
    classes.iter().all(|c| c.windows(2).all(|w| colors[w[0]] == colors[w[1]]))
}

fn check_counterexample(cert: &Certificate, n: usize, coloring: &[crate::cert::ColoredObject]) -> Result<Verdict> {
    let dom = rebuild(cert, n)?;
    let r = param_u8(cert, "r")?;
    let given: HashMap<&str, u8> = coloring.iter().map(|c| (c.object.as_str(), c.color)).collect();
    if given.len() != coloring.len() {
        return Ok(Verdict::Fail("an object is colored twice".into()));
    }
    if given.len() != dom.objects.len() {
        return Ok(Verdict::Fail(format!(
            "coloring has {} objects, the domain has {}",
            given.len(),
            dom.objects.len()
        )));
    }
    let mut colors = Vec::with_capacity(dom.objects.len());
    for o in &dom.objects {
        match given.get(o.as_str()) {
            Some(&c) if (1..=r).contains(&c) => colors.push(c),
            Some(&c) => return Ok(Verdict::Fail(format!("{o} has color {c} outside 1..={r}"))),
            None => return Ok(Verdict::Fail(format!("{o} is not colored"))),
        }
    }
    for (name, classes) in &dom.candidates {
        if mono(classes, &colors) {
            return Ok(Verdict::Fail(format!("{name} is a witness for the claimed counterexample")));
        }
    }
    Ok(Verdict::Pass)
}

/// Plain backtracking over colorings with colors in order of first use;
/// a prefix is abandoned once some candidate is complete and monochromatic.
fn check_exhaustive(cert: &Certificate, n: usize, points: usize, cfg: &VerifyConfig) -> Result<(Verdict, u64)> {
    let dom = rebuild(cert, n)?;
    let r = param_u8(cert, "r")?;
    if points != dom.objects.len() {
        return Ok((Verdict::Fail(format!("claimed {points} points, the domain has {}", dom.objects.len())), 0));
    }
    let np = dom.objects.len();
    let mut completes_at: Vec<Vec<usize>> = vec![Vec::new(); np];
    for (ci, (_, classes)) in dom.candidates.iter().enumerate() {
        if let Some(&last) = classes.iter().flatten().max() {
            completes_at[last].push(ci);
        } else {
            // A candidate with no points is a witness for every coloring.
            return Ok((Verdict::Pass, 0));
        }
    }
    let mut colors = vec![0u8; np];
    let mut nodes = 0u64;
    // Explicit stack of (point, next color to try).
    let mut pos = 0usize;
    let mut used = vec![0u8; np + 1];
    if np == 0 {
        return Ok((Verdict::Fail("the empty coloring has no witness".into()), 0));
    }
    loop {
        let limit = r.min(used[pos] + 1);
        if colors[pos] < limit {
            colors[pos] += 1;
            nodes += 1;
            if nodes > cfg.max_nodes {
                return Ok((Verdict::Unchecked { nodes }, nodes));
            }
            let blocked = completes_at[pos].iter().any(|&ci| mono(&dom.candidates[ci].1, &colors));
            if blocked {
                continue;
            }
            if pos + 1 == np {
                let sample: Vec<String> =
                    dom.objects.iter().zip(&colors).take(8).map(|(o, c)| format!("{o}={c}")).collect();
                return Ok((
                    Verdict::Fail(format!("found a coloring with no witness: {} ...", sample.join(", "))),
                    nodes,
                ));
            }
            used[pos + 1] = used[pos].max(colors[pos]);
            pos += 1;
            colors[pos] = 0;
        } else {
            colors[pos] = 0;
            if pos == 0 {
                return Ok((Verdict::Pass, nodes));
            }
            pos -= 1;
        }
    }
}

fn first_off_color<T: Colorable>(items: &[T], oracle: &Oracle, claimed: Option<u8>) -> Result<Option<String>> {
    let mut seen = claimed;
    for t in items {
        let c = oracle.color(t)?;
        match seen {
            None => seen = Some(c),
            Some(s) if s != c => return Ok(Some(format!("{} has color {c}, expected {s}", t.canonical()))),
            _ => {}
        }
    }
    Ok(None)
}

fn shape_error(b: &BlockSequence, level: u8, width: usize, len: usize) -> Option<String> {
    if b.level() != level || b.width() != width || b.len() != len {
        Some(format!(
            "witness {b} is not a length-{len} sequence in FIN_{level}({width})"
        ))
    } else {
        None
    }
}

/// Re-derives a witness claim using the given coloring.
pub fn check_witness_with(cert: &Certificate, oracle: &Oracle) -> Result<Verdict> {
    let (n, witness) = match &cert.payload {
        Payload::Witness { n, witness, .. } | Payload::Chain { n, witness, .. } => (*n, witness.as_str()),
        _ => return Err(Error::InvalidParameter("not a witness certificate".into())),
    };
    let claimed = cert.claimed_color;
    let fail = |s: String| Ok(Verdict::Fail(s));
    match cert.theorem {
        TheoremId::Gowers | TheoremId::Pipeline => {
            let (k, l, m, d) = (param_u8(cert, "k")?, param_u8(cert, "l")?, cert.param("m")?, cert.param("d")?);
            let b = BlockSequence::parse(witness)?;
            if let Some(e) = shape_error(&b, l, n, m) {
                return fail(e);
            }
            if let Some(e) = first_off_color(&combined_span_d(&b, k, d)?, oracle, claimed)? {
                return fail(format!("span element {e}"));
            }
            if let Payload::Chain { stages, .. } = &cert.payload {
                if let Some(e) = check_stages(stages, d)? {
                    return fail(e);
                }
            }
            Ok(Verdict::Pass)
        }
        TheoremId::Neighbour => {
            let shifts = cert.param_list("shifts")?.into_iter().map(|s| s as u8).collect::<Vec<_>>();
            let sel = SpanSelector::neighbours(&shifts)?;
            let b = BlockSequence::parse(witness)?;
            if let Some(e) = shape_error(&b, sel.level(), n, cert.param("m")?) {
                return fail(e);
            }
            match first_off_color(&span_d(&b, &sel, 1)?, oracle, claimed)? {
                Some(e) => fail(format!("span element {e}")),
                None => Ok(Verdict::Pass),
            }
        }
        TheoremId::TypeHom => {
            let (k, m, d) = (param_u8(cert, "k")?, cert.param("m")?, cert.param("d")?);
            let a = BlockSequence::parse(witness)?;
            if let Some(e) = shape_error(&a, 1, n, m) {
                return fail(e);
            }
            let all = enumerate_block_sequences(k, n, d)?;
            for class in type_classes(&a, &all)? {
                let items = class.iter().map(|s| BlockSequence::parse(s)).collect::<Result<Vec<_>>>()?;
                if let Some(e) = first_off_color(&items, oracle, None)? {
                    return fail(format!("type class element {e}"));
                }
            }
            Ok(Verdict::Pass)
        }
        TheoremId::SizeInsens => {
            let (k, l, d) = (cert.param_list("k")?, cert.param_list("l")?, cert.param("d")?);
            let sets: Vec<Vec<usize>> = witness
                .split('|')
                .map(|s| {
                    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
                    if inner.is_empty() {
                        Ok(Vec::new())
                    } else {
                        inner.split(',').map(|x| x.trim().parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>()
                    }
                })
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("malformed set witness {witness:?}")))?;
            if sets.len() != l.len()
                || sets.iter().zip(&l).any(|(s, &li)| s.len() != li || s.windows(2).any(|w| w[0] >= w[1]))
                || sets.iter().flatten().any(|&x| x < 1 || x > n)
            {
                return fail(format!("witness {witness} does not have the sizes {l:?} inside 1..={n}"));
            }
            let mut classes: BTreeMap<Vec<Vec<usize>>, Vec<Sets>> = BTreeMap::new();
            for s in sets_inside(&sets, &k, d) {
                classes.entry(size_key(&s)).or_default().push(s);
            }
            for class in classes.values() {
                if let Some(e) = first_off_color(class, oracle, None)? {
                    return fail(format!("size class element {e}"));
                }
            }
            Ok(Verdict::Pass)
        }
        other => Err(Error::InvalidParameter(format!("{} certificates carry no witness", other.name()))),
    }
}

/// Consistency of the per-level records of an extraction.
fn check_stages(stages: &[serde_json::Value], d: usize) -> Result<Option<String>> {
    for (i, st) in stages.iter().enumerate() {
        let get = |key: &str| st.get(key).and_then(|v| v.as_str()).map(str::to_string);
        let num = |key: &str| st.get(key).and_then(|v| v.as_u64());
        let (Some(k), Some(l), Some(a), Some(w)) = (num("k"), num("l"), get("a"), get("witness")) else {
            return Ok(Some(format!("stage {i} is missing fields")));
        };
        let (k, l) = (k as u8, l as u8);
        let a = BlockSequence::parse(&a)?;
        let w = BlockSequence::parse(&w)?;
        if k == 1 {
            let expected: Vec<FinElement> = a
                .entries()
                .iter()
                .map(|e| FinElement::indicator(l, a.width(), &e.support().collect::<Vec<_>>(), l))
                .collect();
            if w.entries() != expected.as_slice() {
                return Ok(Some(format!("stage {i}: base witness is not l times the Milliken-Taylor blocks")));
            }
            continue;
        }
        let (Some(c), Some(sub), Some(moved)) = (get("pyramids"), get("sub_witness"), get("transferred")) else {
            return Ok(Some(format!("stage {i} is missing its pyramid fields")));
        };
        let c_seq = BlockSequence::parse(&c)?;
        let pyr = pyramids_over(l, &a)?;
        if pyr.sequence() != &c_seq {
            return Ok(Some(format!("stage {i}: pyramids do not sit on the recorded sequence")));
        }
        let shifted = pyr.tetris1()?;
        let sub = BlockSequence::parse(&sub)?;
        let moved = BlockSequence::parse(&moved)?;
        if followup_transfer(&sub, &shifted)? != moved {
            return Ok(Some(format!("stage {i}: transfer onto T_1(C) does not match")));
        }
        if w.tetris1()? != moved {
            return Ok(Some(format!("stage {i}: T_1 of the lifted witness is not the transferred one")));
        }
        let induced: HashMap<String, u8> = st
            .get("induced")
            .and_then(|v| v.as_array())
            .map(|arr| {
                arr.iter()
                    .filter_map(|o| Some((o.get("object")?.as_str()?.to_string(), o.get("color")?.as_u64()? as u8)))
                    .collect()
            })
            .unwrap_or_default();
        let mut seen = None;
        for t in combined_span_d(&sub, k - 1, d)? {
            let Some(&c) = induced.get(&t.canonical()) else {
                return Ok(Some(format!("stage {i}: {t} missing from the pulled-back coloring")));
            };
            if seen.is_some_and(|s| s != c) {
                return Ok(Some(format!("stage {i}: sub-witness span element {t} breaks monochromaticity")));
            }
            seen = Some(c);
        }
    }
    Ok(None)
}

/// Checks a certificate from its payload alone; witness payloads need
/// their coloring source to be reachable.
pub fn verify_certificate(cert: &Certificate, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut warnings = Vec::new();
    if cert.tool_version != TOOL_VERSION {
        warnings.push(format!("certificate written by version {}, checking with {TOOL_VERSION}", cert.tool_version));
    }
    if cert.status != Status::Verified {
        warnings.push("certificate is marked unverified".into());
    }
    let (verdict, nodes) = match &cert.payload {
        Payload::Counterexample { n, coloring } => (check_counterexample(cert, *n, coloring)?, 0),
        Payload::Exhaustive { n, points, .. } => check_exhaustive(cert, *n, *points, cfg)?,
        Payload::Witness { coloring, .. } | Payload::Chain { coloring, .. } => {
            let r = param_u8(cert, "r").ok();
            let oracle = Oracle::from_spec(coloring, r)?;
            (check_witness_with(cert, &oracle)?, 0)
        }
    };
    Ok(VerifyReport { verdict, warnings, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::{params, ColoredObject};

    fn counter(theorem: TheoremId, p: &[(&str, usize)], n: usize, coloring: Vec<(String, u8)>) -> Certificate {
        Certificate::new(
            theorem,
            p.iter().map(|&(k, v)| (k.to_string(), serde_json::Value::from(v))).collect(),
            Payload::Counterexample {
                n,
                coloring: coloring.into_iter().map(|(object, color)| ColoredObject { object, color }).collect(),
            },
        )
    }

    #[test]
    fn five_cycle_defeats_triangles() {
        let ground: Vec<usize> = (1..=5).collect();
        let coloring = subsets(&ground, 2)
            .into_iter()
            .map(|e| {
                let gap = (e[1] - e[0]).min(5 - (e[1] - e[0]));
                (set_text(&e), gap as u8)
            })
            .collect();
        let cert = counter(TheoremId::Ramsey, &[("k", 2), ("l", 3), ("r", 2)], 5, coloring);
        assert_eq!(verify_certificate(&cert, &VerifyConfig::default()).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn exhaustive_triangles_at_six() {
        let cert = Certificate::new(
            TheoremId::Ramsey,
            params([("k", 2), ("l", 3), ("r", 2)]),
            Payload::Exhaustive { n: 6, points: 15, constraints: 20 },
        );
        assert_eq!(verify_certificate(&cert, &VerifyConfig::default()).unwrap().verdict, Verdict::Pass);
        let five = Certificate::new(
            TheoremId::Ramsey,
            params([("k", 2), ("l", 3), ("r", 2)]),
            Payload::Exhaustive { n: 5, points: 10, constraints: 10 },
        );
        assert!(matches!(verify_certificate(&five, &VerifyConfig::default()).unwrap().verdict, Verdict::Fail(_)));
        let tight = VerifyConfig { max_nodes: 10 };
        assert!(matches!(verify_certificate(&cert, &tight).unwrap().verdict, Verdict::Unchecked { .. }));
    }

    #[test]
    fn parity_defeats_pairs_at_three() {
        let coloring = enumerate_block_sequences(1, 3, 1)
            .unwrap()
            .iter()
            .map(|b| (b.canonical(), (b.entries()[0].support_size() % 2 + 1) as u8))
            .collect();
        let cert = counter(TheoremId::Mt, &[("d", 1), ("m", 2), ("r", 2)], 3, coloring);
        assert_eq!(verify_certificate(&cert, &VerifyConfig::default()).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn witness_tampering_is_caught() {
        let mut p = params([("k", 1), ("l", 1), ("m", 2), ("d", 1)]);
        p.insert("r".into(), 2.into());
        let good = Certificate::new(
            TheoremId::Gowers,
            p.clone(),
            Payload::Witness { n: 4, witness: "1:4:[1,1,0,0];1:4:[0,0,1,1]".into(), coloring: "builtin:supp-parity".into() },
        )
        .with_color(1);
        assert_eq!(verify_certificate(&good, &VerifyConfig::default()).unwrap().verdict, Verdict::Pass);
        let bad = Certificate::new(
            TheoremId::Gowers,
            p,
            Payload::Witness { n: 4, witness: "1:4:[1,0,0,0];1:4:[0,0,1,1]".into(), coloring: "builtin:supp-parity".into() },
        )
        .with_color(1);
        match verify_certificate(&bad, &VerifyConfig::default()).unwrap().verdict {
            Verdict::Fail(why) => assert!(why.contains("span element"), "{why}"),
            other => panic!("{other:?}"),
        }
        let absent = Certificate::new(
            TheoremId::Gowers,
            params([("k", 1), ("l", 1), ("m", 1), ("d", 1)]),
            Payload::Witness { n: 1, witness: "1:1:[1]".into(), coloring: "exec:/nonexistent/oracle".into() },
        );
        assert!(matches!(verify_certificate(&absent, &VerifyConfig::default()), Err(Error::MissingColoring(_))));
    }
}
