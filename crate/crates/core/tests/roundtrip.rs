//! Every certificate emitted by the searches passes independent verification.

use finram::cert::Certificate;
use finram::coloring::{Builtin, Oracle};
use finram::fans::OrderedFan;
use finram::search::fanpair::{min_ramsey_witness, FanWitness};
use finram::search::gowers::{gowers_witness_certificate, min_gowers};
use finram::search::mt::min_milliken_taylor;
use finram::search::probe::verify_neighbour;
use finram::search::ramsey::min_classical_ramsey;
use finram::search::sizeins::{min_size_insensitive, SizeParams};
use finram::search::typehom::min_type_homogeneous;
use finram::search::{Check, MinResult, SearchConfig};
use finram::verify::{verify_certificate, Verdict, VerifyConfig};

fn passes(cert: &Certificate) {
    let report = verify_certificate(cert, &VerifyConfig::default()).unwrap();
    assert_eq!(report.verdict, Verdict::Pass, "{}", cert.to_json());
    assert!(report.warnings.is_empty(), "{:?}", report.warnings);
}

fn both(res: MinResult) -> usize {
    passes(&res.below);
    passes(&res.at);
    res.value
}

#[test]
fn classical_ramsey() {
    let cfg = SearchConfig::default();
    assert_eq!(both(min_classical_ramsey(2, 3, 2, &cfg).unwrap().exact().unwrap()), 6);
    assert_eq!(both(min_classical_ramsey(1, 3, 3, &cfg).unwrap().exact().unwrap()), 7);
}

#[test]
fn milliken_taylor_and_finite_unions() {
    let cfg = SearchConfig::default();
    assert_eq!(both(min_milliken_taylor(1, 2, 2, &cfg).unwrap().exact().unwrap()), 5);
    assert_eq!(both(min_gowers(1, 1, 2, 1, 2, &cfg).unwrap().exact().unwrap()), 5);
    assert_eq!(both(min_gowers(2, 2, 1, 1, 2, &cfg).unwrap().exact().unwrap()), 1);
}

#[test]
fn type_and_size_statements() {
    let cfg = SearchConfig::default();
    assert_eq!(both(min_type_homogeneous(1, 2, 1, 2, &cfg).unwrap().exact().unwrap()), 5);
    let p = SizeParams::new(vec![1], vec![2], 1).unwrap();
    assert_eq!(both(min_size_insensitive(&p, 2, &cfg).unwrap().exact().unwrap()), 3);
    let p = SizeParams::new(vec![1, 1], vec![1, 1], 2).unwrap();
    both(min_size_insensitive(&p, 2, &cfg).unwrap().exact().unwrap());
}

#[test]
fn neighbour_and_fans() {
    let cfg = SearchConfig::default();
    match verify_neighbour(&[0, 1], 1, 2, 2, &cfg).unwrap() {
        Check::Holds(c) | Check::Fails(c) => passes(&c),
        other => panic!("{other:?}"),
    }
    match min_ramsey_witness(OrderedFan::chain(1), OrderedFan::chain(2), 2, &cfg).unwrap() {
        FanWitness::Found { at, below, .. } => {
            passes(&at);
            below.iter().for_each(passes);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn witness_certificates() {
    let oracle = Oracle::builtin(Builtin::MaxPosMod(2));
    let cert = gowers_witness_certificate(&oracle, 1, 2, 2, 1, 6).unwrap().unwrap();
    passes(&cert);
    let mut tampered = cert.clone();
    tampered.claimed_color = Some(3 - cert.claimed_color.unwrap());
    assert!(matches!(verify_certificate(&tampered, &VerifyConfig::default()).unwrap().verdict, Verdict::Fail(_)));
}
