use std::path::Path;
use std::process::{Command, Output};

fn finram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finram")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn minimum_is_cached_after_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("r.json");
    let run = |o: &Path| {
        finram(&["search", "min-ramsey", "2", "3", "--colors", "2", "--cache", cache.to_str().unwrap(), "--out", o.to_str().unwrap()])
    };
    assert_eq!(code(&run(&out)), 0);
    let doc = json(&out);
    assert_eq!(doc["value"], 6);
    assert_eq!(doc["cached"], true);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);

    for side in ["below", "at"] {
        let file = dir.path().join(format!("{side}.json"));
        std::fs::write(&file, serde_json::to_string(&doc[side]).unwrap()).unwrap();
        let v = finram(&["verify", file.to_str().unwrap()]);
        assert_eq!(code(&v), 0, "{side}: {}", stdout(&v));
    }

    let again = dir.path().join("again.json");
    assert_eq!(code(&run(&again)), 0);
    assert_eq!(json(&again)["cached"], true);
    assert_eq!(json(&again)["at"], doc["at"]);

    let bounds = finram(&["bounds", "eval", "R(2,3,2)", "--cache", cache.to_str().unwrap()]);
    let bounds: serde_json::Value = serde_json::from_str(&stdout(&bounds)).unwrap();
    assert_eq!(bounds["value"], "6");
}

#[test]
fn exit_codes() {
    let fails = finram(&["search", "min-mt", "1", "2", "--colors", "2", "--at", "3"]);
    assert_eq!(code(&fails), 1);
    assert!(stdout(&fails).contains("counterexample"));
    assert_eq!(code(&finram(&["search", "min-mt", "1", "2", "--colors", "2", "--at", "5"])), 0);
    assert_eq!(code(&finram(&["search", "min-ramsey", "2", "4", "--colors", "2", "--budget-nodes", "50"])), 2);
    assert_eq!(code(&finram(&["search", "min-ramsey", "2", "3"])), 3);
    assert_eq!(code(&finram(&["frobnicate"])), 3);
    assert_eq!(code(&finram(&["search", "min-gowers", "1", "2", "2", "1", "--colors", "2", "--at", "x"])), 3);
    assert_eq!(code(&finram(&["--help"])), 0);
}

#[test]
fn exec_oracle_witness_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("w.json");
    let coloring = "exec:sh -c 'while read -r l; do echo 1; done'";
    let out = finram(&[
        "search", "min-gowers", "1", "2", "2", "1", "--coloring", coloring, "--colors", "2", "--at", "3", "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(code(&finram(&["verify", cert.to_str().unwrap()])), 0);

    // Same witness against a coloring that separates it.
    let v = finram(&["verify", cert.to_str().unwrap(), "--coloring", "builtin:supp-parity"]);
    assert_eq!(code(&v), 1);
    assert!(stdout(&v).contains("span element"));

    let mut doc = json(&cert);
    doc["claimed_color"] = 2.into();
    std::fs::write(&cert, doc.to_string()).unwrap();
    let v = finram(&["verify", cert.to_str().unwrap()]);
    assert_eq!(code(&v), 1);
    assert!(stdout(&v).starts_with("fail: span element"));

    doc["payload"]["coloring"] = "exec:/no/such/oracle".into();
    std::fs::write(&cert, doc.to_string()).unwrap();
    let v = finram(&["verify", cert.to_str().unwrap()]);
    assert_eq!(code(&v), 3);
    assert!(String::from_utf8_lossy(&v.stderr).contains("missing coloring source"));
}

#[test]
fn oracle_protocol_violation_aborts() {
    for script in ["exec:sh -c 'while read -r l; do echo blue; done'", "exec:sh -c 'while read -r l; do echo 7; done'"] {
        let out = finram(&["search", "min-gowers", "1", "1", "1", "1", "--coloring", script, "--colors", "2", "--at", "2"]);
        assert_eq!(code(&out), 3, "{script}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("oracle"), "{script}");
    }
}

#[test]
fn pipeline_extract_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("p.json");
    let out = finram(&["pipeline", "extract", "2", "2", "1", "1", "--coloring", "builtin:max-pos-mod:2", "--out", cert.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&cert)["theorem"], "pipeline");
    assert_eq!(code(&finram(&["verify", cert.to_str().unwrap()])), 0);
}

#[test]
fn structural_commands() {
    let epis = finram(&["fans", "epis", "5:1", "2:1"]);
    assert_eq!(stdout(&epis).lines().count(), 10);
    let naive = finram(&["fans", "epis", "5:1", "2:1", "--naive"]);
    assert_eq!(stdout(&epis), stdout(&naive));

    let amal = finram(&["fans", "amalgamate", "2:1->1:1:(1,2):[1]", "1:2->1:1:(1,3):[1];[1]"]);
    assert_eq!(code(&amal), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&amal)).unwrap();
    assert_eq!(doc["d"], "2:2");

    assert_eq!(stdout(&finram(&["enumerate", "blocks", "1", "3", "2"])).lines().count(), 5);
    assert_eq!(stdout(&finram(&["type", "count", "2", "3", "1"])).trim(), "5");
    let span = finram(&["span", "1:2:[1,0];1:2:[0,1]"]);
    assert_eq!(stdout(&span).lines().collect::<Vec<_>>(), ["1:2:[0,1]", "1:2:[1,0]", "1:2:[1,1]"]);
    let ty = finram(&["type", "apply", "2:(1,2)", "1:3:[1,0,0];1:3:[0,1,1]"]);
    assert_eq!(stdout(&ty).trim(), "2:3:[1,2,2]");
}
