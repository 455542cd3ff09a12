//! Exact verifiers, minimal-number searches and witness finders.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::Value;

use crate::cert::{Certificate, ColoredObject, Payload, TheoremId};
use crate::error::Result;

pub mod fanpair;
pub mod gowers;
pub mod mt;
pub mod probe;
pub mod ramsey;
pub mod sizeins;
pub mod solver;
pub mod typehom;

pub use solver::{solve, Budget, PrefixFilter, Problem, SearchConfig, SolveReport, Verdict};

/// One "does every coloring at size n have a witness" question.
pub struct Instance {
    pub theorem: TheoremId,
    pub params: BTreeMap<String, Value>,
    pub n: usize,
    /// Canonical serializations of the points, in solver order.
    pub objects: Vec<String>,
    pub problem: Problem,
    pub filter: Option<Box<dyn PrefixFilter + Send>>,
}

impl Instance {
    fn certificate(&self, payload: Payload) -> Certificate {
        let mut params = self.params.clone();
        params.insert("r".into(), Value::from(self.problem.colors()));
        Certificate::new(self.theorem, params, payload)
    }
}

/// Result of checking one size.
#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    /// Every coloring has a witness.
    Holds(Certificate),
    /// A coloring without a witness.
    Fails(Certificate),
    BudgetExceeded { nodes: u64 },
}

/// Runs the solver on an instance and wraps the answer in a certificate.
pub fn check_instance(inst: &Instance, cfg: &SearchConfig) -> (Check, u64) {
    let filter = inst.filter.as_deref().map(|f| f as &dyn PrefixFilter);
    let report = solve(&inst.problem, filter, cfg);
    let check = match report.verdict {
        Verdict::Holds => Check::Holds(
            inst.certificate(Payload::Exhaustive {
                n: inst.n,
                points: inst.problem.npoints(),
                constraints: inst.problem.constraint_count(),
            })
            .verified(),
        ),
        Verdict::Counterexample(colors) => {
            assert!(inst.problem.is_counterexample(&colors), "solver returned a non-counterexample");
            let coloring = inst
                .objects
                .iter()
                .zip(&colors)
                .map(|(o, &c)| ColoredObject { object: o.clone(), color: c })
                .collect();
            Check::Fails(inst.certificate(Payload::Counterexample { n: inst.n, coloring }).verified())
        }
        Verdict::BudgetExceeded => Check::BudgetExceeded { nodes: report.nodes },
    };
    (check, report.nodes)
}

/// An exact minimal number with both certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct MinResult {
    pub value: usize,
    /// Counterexample at `value - 1`.
    pub below: Certificate,
    /// Exhaustive pass at `value`.
    pub at: Certificate,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MinOutcome {
    Exact(MinResult),
    /// Every size below `verified_below` was shown to fail.
    BudgetExceeded { verified_below: usize, nodes: u64 },
}

impl MinOutcome {
    pub fn value(&self) -> Option<usize> {
        match self {
            MinOutcome::Exact(r) => Some(r.value),
            MinOutcome::BudgetExceeded { .. } => None,
        }
    }

    pub fn exact(self) -> Option<MinResult> {
        match self {
            MinOutcome::Exact(r) => Some(r),
            MinOutcome::BudgetExceeded { .. } => None,
        }
    }
}

/// Linear scan: checks `lower - 1` (expected to fail), then `lower`,
/// `lower + 1`, ... until an instance holds. Budgets cover the whole scan.
pub fn scan_min(
    lower: usize,
    mut build: impl FnMut(usize) -> Result<Instance>,
    cfg: &SearchConfig,
) -> Result<MinOutcome> {
    let start = Instant::now();
    let mut nodes_total = 0u64;
    let mut below: Option<Certificate> = None;
    let mut n = lower.saturating_sub(1);
    loop {
        let mut local = *cfg;
        if let Some(max) = cfg.budget.max_nodes {
            local.budget.max_nodes = Some(max.saturating_sub(nodes_total));
        }
        if let Some(secs) = cfg.budget.max_seconds {
            local.budget.max_seconds = Some((secs - start.elapsed().as_secs_f64()).max(0.0));
        }
        let inst = build(n)?;
        let (check, nodes) = check_instance(&inst, &local);
        nodes_total += nodes;
        match check {
            Check::Fails(cert) => below = Some(cert),
            Check::Holds(cert) => {
                let Some(below) = below else {
                    // The statement already holds at lower - 1; step down.
                    if n == 0 {
                        return Err(crate::Error::InvalidParameter("statement holds at size 0".into()));
                    }
                    return scan_min(lower - 1, build, cfg);
                };
                return Ok(MinOutcome::Exact(MinResult { value: n, below, at: cert, nodes: nodes_total }));
            }
            Check::BudgetExceeded { .. } => {
                return Ok(MinOutcome::BudgetExceeded { verified_below: n, nodes: nodes_total });
            }
        }
        n += 1;
    }
}

/// Sorted index of a list of keys.
pub(crate) fn index_of<K: std::hash::Hash + Eq + Clone>(keys: &[K]) -> std::collections::HashMap<K, u32> {
    keys.iter().enumerate().map(|(i, k)| (k.clone(), i as u32)).collect()
}
