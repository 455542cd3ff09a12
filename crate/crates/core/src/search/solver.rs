//! Counterexample search shared by every exact minimal-number computation.
//!
//! An instance is a set of points and a list of constraints. Each
//! constraint is a list of classes (sets of points); it is *satisfied* by a
//! coloring when every one of its classes is monochromatic, which is what a
//! Ramsey witness needs. A counterexample coloring breaks at least one class
//! of every constraint. The solver returns the lexicographically least
//! counterexample with colors in order of first use, or reports that none
//! exists, meaning the Ramsey statement holds for this instance.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

const NONE: u8 = u8::MAX;
const TARGET_PREFIXES: usize = 64;
const FLUSH_EVERY: u64 = 256;
const WORKER_STACK: usize = 64 << 20;

/// Resource limits of a search. Exceeding either is its own outcome.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes: Some(max_nodes), max_seconds: None }
    }
}

/// Budget plus worker count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: Budget,
    pub workers: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: Budget::unlimited(), workers: 1 }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        SearchConfig { budget: Budget::unlimited(), workers: workers.max(1) }
    }

    /// All available hardware threads.
    pub fn max_workers() -> Self {
        SearchConfig::with_workers(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

/// Hook rejecting prefixes that are not canonical under a symmetry of the problem.
/// Must never reject a prefix of the lexicographically least counterexample.
pub trait PrefixFilter: Sync {
    /// Prefix lengths at which [`PrefixFilter::accept`] is consulted.
    fn checkpoints(&self) -> Vec<usize>;
    /// `prefix` holds 0-based colors of the first points.
    fn accept(&self, prefix: &[u8]) -> bool;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// 1-based colors of every point.
    Counterexample(Vec<u8>),
    Holds,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub verdict: Verdict,
    /// Search nodes visited; varies with the worker count.
    pub nodes: u64,
}

/// A compiled instance.
#[derive(Debug, Clone)]
pub struct Problem {
    npoints: usize,
    colors: u8,
    classes: Vec<Vec<u32>>,
    constraints: Vec<Vec<u32>>,
    point_classes: Vec<Vec<u32>>,
    class_constraints: Vec<Vec<u32>>,
    /// Some constraint can never be broken.
    forced: bool,
}

impl Problem {
    /// `raw` lists constraints as lists of classes of point indices.
    /// Singleton classes can never break and are dropped; identical classes
    /// are shared.
    pub fn new(npoints: usize, colors: u8, raw: impl IntoIterator<Item = Vec<Vec<u32>>>) -> Self {
        assert!((1..=16).contains(&colors), "the solver supports 1..=16 colors");
        let mut class_ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut classes: Vec<Vec<u32>> = Vec::new();
        let mut constraints = Vec::new();
        let mut forced = false;
        for constraint in raw {
            let mut ids = Vec::new();
            for mut class in constraint {
                class.sort_unstable();
                class.dedup();
                if class.len() < 2 {
                    continue;
                }
                let id = *class_ids.entry(class.clone()).or_insert_with(|| {
                    classes.push(class);
                    (classes.len() - 1) as u32
                });
                ids.push(id);
            }
            ids.sort_unstable();
            ids.dedup();
            if ids.is_empty() {
                forced = true;
            }
            constraints.push(ids);
        }
        let mut point_classes = vec![Vec::new(); npoints];
        for (id, class) in classes.iter().enumerate() {
            for &p in class {
                point_classes[p as usize].push(id as u32);
            }
        }
        let mut class_constraints = vec![Vec::new(); classes.len()];
        for (k, ids) in constraints.iter().enumerate() {
            for &id in ids {
                class_constraints[id as usize].push(k as u32);
            }
        }
        Problem { npoints, colors, classes, constraints, point_classes, class_constraints, forced }
    }

    pub fn npoints(&self) -> usize {
        self.npoints
    }

    pub fn colors(&self) -> u8 {
        self.colors
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// True iff `coloring` (1-based) breaks some class of every constraint.
    pub fn is_counterexample(&self, coloring: &[u8]) -> bool {
        coloring.len() == self.npoints
            && self.constraints.iter().all(|ids| {
                ids.iter().any(|&id| {
                    let class = &self.classes[id as usize];
                    class.iter().any(|&p| coloring[p as usize] != coloring[class[0] as usize])
                })
            })
    }
}

enum Undo {
    Class { class: u32, old_mask: u16 },
    Domain { point: u32, old: u16 },
}

struct Shared<'a> {
    nodes: AtomicU64,
    stop: AtomicBool,
    exceeded: AtomicBool,
    best: AtomicUsize,
    budget: Budget,
    start: Instant,
    filter: Option<&'a dyn PrefixFilter>,
    checkpoints: Vec<bool>,
}

impl Shared<'_> {
    fn over_budget(&self) -> bool {
        if let Some(max) = self.budget.max_nodes {
            if self.nodes.load(Ordering::Relaxed) > max {
                return true;
            }
        }
        if let Some(secs) = self.budget.max_seconds {
            if self.start.elapsed() > Duration::from_secs_f64(secs) {
                return true;
            }
        }
        false
    }
}

enum Step {
    Found,
    Exhausted,
    Abort,
}

struct State<'p> {
    p: &'p Problem,
    color: Vec<u8>,
    domain: Vec<u16>,
    mask: Vec<u16>,
    left: Vec<u32>,
    broken: Vec<u32>,
    open: Vec<u32>,
    trail: Vec<Undo>,
    local_nodes: u64,
    /// Prefix index this state works on; aborts when a smaller one has a solution.
    prefix_index: usize,
}

impl<'p> State<'p> {
    fn new(p: &'p Problem) -> Self {
        let full: u16 = if p.colors == 16 { u16::MAX } else { (1u16 << p.colors) - 1 };
        let open = p.constraints.iter().map(|ids| ids.len() as u32).collect();
        State {
            p,
            color: vec![NONE; p.npoints],
            domain: vec![full; p.npoints],
            mask: vec![0; p.classes.len()],
            left: p.classes.iter().map(|c| c.len() as u32).collect(),
            broken: vec![0; p.constraints.len()],
            open,
            trail: Vec::new(),
            local_nodes: 0,
            prefix_index: 0,
        }
    }

    /// Colors `pt` and propagates; false on conflict. Changes stay on the
    /// trail either way.
    fn assign(&mut self, pt: usize, c: u8) -> bool {
        let p = self.p;
        self.color[pt] = c;
        let bit = 1u16 << c;
        for &cl in &p.point_classes[pt] {
            let cl = cl as usize;
            let old = self.mask[cl];
            let new = old | bit;
            self.trail.push(Undo::Class { class: cl as u32, old_mask: old });
            self.mask[cl] = new;
            self.left[cl] -= 1;
            let newly_broken = old.count_ones() == 1 && new != old;
            for &k in &p.class_constraints[cl] {
                if newly_broken {
                    self.broken[k as usize] += 1;
                }
                if self.left[cl] == 0 {
                    self.open[k as usize] -= 1;
                }
            }
        }
        for &cl in &p.point_classes[pt] {
            for &k in &p.class_constraints[cl as usize] {
                if !self.check_constraint(k as usize) {
                    return false;
                }
            }
        }
        true
    }

    fn check_constraint(&mut self, k: usize) -> bool {
        if self.broken[k] > 0 {
            return true;
        }
        match self.open[k] {
            0 => false,
            1 => {
                let p = self.p;
                let oc = *p.constraints[k].iter().find(|&&id| self.left[id as usize] > 0).expect("one open class")
                    as usize;
                let m = self.mask[oc];
                if self.left[oc] != 1 || m.count_ones() != 1 {
                    return true;
                }
                let q = *p.classes[oc].iter().find(|&&q| self.color[q as usize] == NONE).expect("one uncolored")
                    as usize;
                let old = self.domain[q];
                if old & m != 0 {
                    self.trail.push(Undo::Domain { point: q as u32, old });
                    self.domain[q] = old & !m;
                }
                self.domain[q] != 0
            }
            _ => true,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        let p = self.p;
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail above mark") {
                Undo::Class { class, old_mask } => {
                    let cl = class as usize;
                    let was_broken = old_mask.count_ones() == 1 && self.mask[cl] != old_mask;
                    let was_complete = self.left[cl] == 0;
                    for &k in &p.class_constraints[cl] {
                        if was_broken {
                            self.broken[k as usize] -= 1;
                        }
                        if was_complete {
                            self.open[k as usize] += 1;
                        }
                    }
                    self.left[cl] += 1;
                    self.mask[cl] = old_mask;
                }
                Undo::Domain { point, old } => self.domain[point as usize] = old,
            }
        }
    }

    fn accepts(&self, shared: &Shared<'_>, depth: usize) -> bool {
        match shared.filter {
            Some(f) if shared.checkpoints.get(depth).copied().unwrap_or(false) => f.accept(&self.color[..depth]),
            _ => true,
        }
    }

    /// Replays a prefix; false if it no longer propagates cleanly.
    fn replay(&mut self, prefix: &[u8]) -> bool {
        for (pt, &c) in prefix.iter().enumerate() {
            if !self.assign(pt, c) {
                return false;
            }
        }
        true
    }

    fn tick(&mut self, shared: &Shared<'_>) -> bool {
        self.local_nodes += 1;
        if self.local_nodes % FLUSH_EVERY == 0 {
            shared.nodes.fetch_add(FLUSH_EVERY, Ordering::Relaxed);
            if shared.over_budget() {
                shared.exceeded.store(true, Ordering::Relaxed);
                shared.stop.store(true, Ordering::Relaxed);
            }
        }
        !(shared.stop.load(Ordering::Relaxed) || shared.best.load(Ordering::Relaxed) < self.prefix_index)
    }

    fn dfs(&mut self, shared: &Shared<'_>, depth: usize, max_used: i32) -> Step {
        if depth == self.p.npoints {
            return Step::Found;
        }
        let limit = ((max_used + 1) as u8).min(self.p.colors - 1);
        for c in 0..=limit {
            if self.domain[depth] & (1 << c) == 0 {
                continue;
            }
            if !self.tick(shared) {
                return Step::Abort;
            }
            let mark = self.trail.len();
            if self.assign(depth, c) && self.accepts(shared, depth + 1) {
                match self.dfs(shared, depth + 1, max_used.max(c as i32)) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            self.undo_to(mark);
            self.color[depth] = NONE;
        }
        Step::Exhausted
    }
}

fn max_used(prefix: &[u8]) -> i32 {
    prefix.iter().map(|&c| c as i32).max().unwrap_or(-1)
}

/// Valid prefixes in lexicographic order, extended until there are enough
/// to spread over workers. Independent of the worker count.
fn split_prefixes(p: &Problem, shared: &Shared<'_>) -> Vec<Vec<u8>> {
    let mut prefixes: Vec<Vec<u8>> = vec![Vec::new()];
    let mut depth = 0;
    while depth < p.npoints && prefixes.len() < TARGET_PREFIXES && !prefixes.is_empty() {
        let mut next = Vec::new();
        for prefix in &prefixes {
            let mut st = State::new(p);
            let ok = st.replay(prefix);
            debug_assert!(ok);
            let limit = ((max_used(prefix) + 1) as u8).min(p.colors - 1);
            for c in 0..=limit {
                if st.domain[depth] & (1 << c) == 0 {
                    continue;
                }
                let mark = st.trail.len();
                if st.assign(depth, c) && st.accepts(shared, depth + 1) {
                    let mut ext = prefix.clone();
                    ext.push(c);
                    next.push(ext);
                }
                st.undo_to(mark);
                st.color[depth] = NONE;
            }
            shared.nodes.fetch_add(1, Ordering::Relaxed);
        }
        prefixes = next;
        depth += 1;
    }
    prefixes
}

/// Finds the lexicographically least counterexample, or proves there is none.
pub fn solve(p: &Problem, filter: Option<&dyn PrefixFilter>, cfg: &SearchConfig) -> SolveReport {
    if p.forced {
        return SolveReport { verdict: Verdict::Holds, nodes: 0 };
    }
    let mut checkpoints = vec![false; p.npoints + 1];
    if let Some(f) = filter {
        for d in f.checkpoints() {
            if d <= p.npoints {
                checkpoints[d] = true;
            }
        }
    }
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        exceeded: AtomicBool::new(false),
        best: AtomicUsize::new(usize::MAX),
        budget: cfg.budget,
        start: Instant::now(),
        filter,
        checkpoints,
    };
    let prefixes = split_prefixes(p, &shared);
    if prefixes.is_empty() {
        return SolveReport { verdict: Verdict::Holds, nodes: shared.nodes.load(Ordering::Relaxed) };
    }
    let depth = prefixes[0].len();
    if depth == p.npoints {
        let sol = prefixes[0].iter().map(|c| c + 1).collect();
        return SolveReport { verdict: Verdict::Counterexample(sol), nodes: shared.nodes.load(Ordering::Relaxed) };
    }

    let next = AtomicUsize::new(0);
    let done: Vec<AtomicBool> = prefixes.iter().map(|_| AtomicBool::new(false)).collect();
    let found: Mutex<Option<(usize, Vec<u8>)>> = Mutex::new(None);
    let worker = || {
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            if i >= prefixes.len() || shared.stop.load(Ordering::Relaxed) || shared.best.load(Ordering::Relaxed) < i {
                break;
            }
            let mut st = State::new(p);
            st.prefix_index = i;
            let ok = st.replay(&prefixes[i]);
            debug_assert!(ok);
            let step = st.dfs(&shared, depth, max_used(&prefixes[i]));
            shared.nodes.fetch_add(st.local_nodes % FLUSH_EVERY, Ordering::Relaxed);
            match step {
                Step::Found => {
                    let sol: Vec<u8> = st.color.iter().map(|c| c + 1).collect();
                    let mut slot = found.lock().expect("result lock");
                    if slot.as_ref().is_none_or(|(j, _)| i < *j) {
                        *slot = Some((i, sol));
                    }
                    shared.best.fetch_min(i, Ordering::Relaxed);
                    done[i].store(true, Ordering::Relaxed);
                }
                Step::Exhausted => done[i].store(true, Ordering::Relaxed),
                Step::Abort => {}
            }
        }
    };
    let workers = cfg.workers.max(1).min(prefixes.len());
    std::thread::scope(|s| {
        for _ in 0..workers {
            std::thread::Builder::new().stack_size(WORKER_STACK).spawn_scoped(s, worker).expect("spawn worker");
        }
    });

    let nodes = shared.nodes.load(Ordering::Relaxed);
    let found = found.into_inner().expect("result lock");
    let exceeded = shared.exceeded.load(Ordering::Relaxed);
    let verdict = match found {
        Some((i, sol)) if done[..i].iter().all(|d| d.load(Ordering::Relaxed)) => Verdict::Counterexample(sol),
        Some(_) => Verdict::BudgetExceeded,
        None if exceeded => Verdict::BudgetExceeded,
        None => Verdict::Holds,
    };
    SolveReport { verdict, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Triangles of K_n as single-class constraints over its edges.
    fn triangles(n: usize) -> Problem {
        let mut index = HashMap::new();
        for j in 0..n {
            for i in 0..j {
                let id = index.len() as u32;
                index.insert((i, j), id);
            }
        }
        let mut raw = Vec::new();
        for c in 0..n {
            for b in 0..c {
                for a in 0..b {
                    raw.push(vec![vec![index[&(a, b)], index[&(a, c)], index[&(b, c)]]]);
                }
            }
        }
        Problem::new(index.len(), 2, raw)
    }

    #[test]
    fn triangle_ramsey() {
        let five = solve(&triangles(5), None, &SearchConfig::default());
        match five.verdict {
            Verdict::Counterexample(c) => assert!(triangles(5).is_counterexample(&c)),
            other => panic!("expected a counterexample, got {other:?}"),
        }
        assert_eq!(solve(&triangles(6), None, &SearchConfig::default()).verdict, Verdict::Holds);
    }

    #[test]
    fn deterministic_across_workers() {
        let p = triangles(5);
        let one = solve(&p, None, &SearchConfig::with_workers(1)).verdict;
        let many = solve(&p, None, &SearchConfig::with_workers(8)).verdict;
        assert_eq!(one, many);
    }

    #[test]
    fn brute_force_agreement() {
        // Random small hypergraphs: compare against full enumeration.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(2..8);
            let colors = rng.gen_range(1..4u8);
            let raw: Vec<Vec<Vec<u32>>> = (0..rng.gen_range(1..6))
                .map(|_| {
                    (0..rng.gen_range(1..3))
                        .map(|_| (0..rng.gen_range(1..4)).map(|_| rng.gen_range(0..n as u32)).collect())
                        .collect()
                })
                .collect();
            let p = Problem::new(n, colors, raw);
            let total = (colors as usize).pow(n as u32);
            let mut least: Option<Vec<u8>> = None;
            for code in 0..total {
                let mut x = code;
                let mut col = vec![0u8; n];
                for slot in col.iter_mut().rev() {
                    *slot = (x % colors as usize) as u8 + 1;
                    x /= colors as usize;
                }
                let mut seen = 0u8;
                let normal = col.iter().all(|&c| {
                    let ok = c <= seen + 1;
                    seen = seen.max(c);
                    ok
                });
                if normal && p.is_counterexample(&col) {
                    least = Some(col);
                    break;
                }
            }
            let got = solve(&p, None, &SearchConfig::default()).verdict;
            match least {
                Some(col) => assert_eq!(got, Verdict::Counterexample(col)),
                None => assert_eq!(got, Verdict::Holds),
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let p = triangles(6);
        let r = solve(&p, None, &SearchConfig { budget: Budget::nodes(10), workers: 1 });
        assert!(matches!(r.verdict, Verdict::BudgetExceeded | Verdict::Holds));
    }
}
