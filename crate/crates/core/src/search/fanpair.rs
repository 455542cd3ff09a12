//! Ramsey pairs of ordered fans: every r-coloring of `(U choose S)` is
//! constant on `(T choose S) ∘ g` for some `g in (U choose T)`.

use std::time::Instant;

use serde_json::Value;

use super::{check_instance, index_of, Check, Instance, Problem, SearchConfig};
use crate::cert::{Certificate, TheoremId};
use crate::error::{Error, Result};
use crate::fans::{enumerate_epimorphisms, FanMap, OrderedFan};

fn admissible(s: OrderedFan, t: OrderedFan) -> Result<()> {
    if t.height() < s.height() || t.width() < s.width() {
        return Err(Error::InvalidParameter(format!("({s}, {t}) is not admissible: T must dominate S")));
    }
    Ok(())
}

pub fn ramsey_pair_instance(s: OrderedFan, t: OrderedFan, u: OrderedFan, r: u8) -> Result<Instance> {
    admissible(s, t)?;
    let points = enumerate_epimorphisms(u, s);
    let index = index_of(&points);
    let inner = enumerate_epimorphisms(t, s);
    let mut raw = Vec::new();
    for g in enumerate_epimorphisms(u, t) {
        let mut class: Vec<u32> = inner.iter().map(|h| g.then(h).map(|f| index[&f])).collect::<Result<_>>()?;
        class.sort_unstable();
        class.dedup();
        raw.push(vec![class]);
    }
    let mut params = std::collections::BTreeMap::new();
    params.insert("S".to_string(), Value::from(s.canonical()));
    params.insert("T".to_string(), Value::from(t.canonical()));
    params.insert("U".to_string(), Value::from(u.canonical()));
    Ok(Instance {
        theorem: TheoremId::RamseyPair,
        params,
        n: u.vertex_count(),
        objects: points.iter().map(FanMap::canonical).collect(),
        problem: Problem::new(points.len(), r, raw),
        filter: None,
    })
}

pub fn check_ramsey_pair(s: OrderedFan, t: OrderedFan, u: OrderedFan, r: u8, cfg: &SearchConfig) -> Result<Check> {
    Ok(check_instance(&ramsey_pair_instance(s, t, u, r)?, cfg).0)
}

/// Candidate witnesses by vertex count, then width.
fn candidates(t: OrderedFan) -> impl Iterator<Item = OrderedFan> {
    let start = t.vertex_count();
    let flat = t.height() == 0;
    (start..).flat_map(move |v| {
        let list: Vec<OrderedFan> = if flat {
            if v == 1 { vec![t] } else { Vec::new() }
        } else {
            (t.width()..v)
                .filter(|w| (v - 1) % w == 0 && (v - 1) / w >= t.height())
                .map(|w| OrderedFan::new((v - 1) / w, w).expect("positive width"))
                .collect()
        };
        list.into_iter()
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum FanWitness {
    Found {
        fan: OrderedFan,
        /// Exhaustive pass at `fan`.
        at: Certificate,
        /// Counterexamples for every earlier candidate.
        below: Vec<Certificate>,
        nodes: u64,
    },
    BudgetExceeded { checked: Vec<OrderedFan>, nodes: u64 },
}

/// Least `U` (vertex count, then width) making `(S, T)` Ramsey for r colors.
pub fn min_ramsey_witness(s: OrderedFan, t: OrderedFan, r: u8, cfg: &SearchConfig) -> Result<FanWitness> {
    admissible(s, t)?;
    let start = Instant::now();
    let mut nodes = 0u64;
    let mut below = Vec::new();
    let mut checked = Vec::new();
    for u in candidates(t) {
        let mut local = *cfg;
        if let Some(max) = cfg.budget.max_nodes {
            local.budget.max_nodes = Some(max.saturating_sub(nodes));
        }
        if let Some(secs) = cfg.budget.max_seconds {
            local.budget.max_seconds = Some((secs - start.elapsed().as_secs_f64()).max(0.0));
        }
        let (check, used) = check_instance(&ramsey_pair_instance(s, t, u, r)?, &local);
        nodes += used;
        match check {
            Check::Holds(at) => return Ok(FanWitness::Found { fan: u, at, below, nodes }),
            Check::Fails(cert) => below.push(cert),
            Check::BudgetExceeded { .. } => return Ok(FanWitness::BudgetExceeded { checked, nodes }),
        }
        checked.push(u);
    }
    unreachable!("candidate stream is infinite")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_pairs() {
        let cfg = SearchConfig::default();
        let (s, t) = (OrderedFan::chain(1), OrderedFan::chain(2));
        assert!(matches!(check_ramsey_pair(s, t, OrderedFan::chain(3), 2, &cfg).unwrap(), Check::Holds(_)));
        assert!(matches!(check_ramsey_pair(s, t, OrderedFan::chain(2), 2, &cfg).unwrap(), Check::Fails(_)));
        assert!(matches!(check_ramsey_pair(s, t, OrderedFan::chain(2), 1, &cfg).unwrap(), Check::Holds(_)));
        for r in 2..=3u8 {
            match min_ramsey_witness(s, t, r, &cfg).unwrap() {
                FanWitness::Found { fan, .. } => assert_eq!(fan, OrderedFan::chain(r as usize + 1)),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn equal_fans_are_their_own_witness() {
        let t = OrderedFan::new(2, 2).unwrap();
        match min_ramsey_witness(t, t, 3, &SearchConfig::default()).unwrap() {
            FanWitness::Found { fan, .. } => assert_eq!(fan, t),
            other => panic!("{other:?}"),
        }
    }
}
