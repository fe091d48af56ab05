use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
}

fn uam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uam"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--structured"];
    all.extend_from_slice(args);
    let out = uam(&all);
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    assert_eq!(doc["schema_version"], 1);
    (out.status.code().unwrap(), doc)
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_reports_base_and_space() {
    let m1 = model("m1.uam");
    let (code, doc) = structured(&["eval", path(&m1), "--expr", "U(up(Sb,{b1}))"]);
    assert_eq!(code, 0);
    assert_eq!(doc["space"], "Sb");
    assert_eq!(doc["base"], serde_json::json!(["b1", "b2"]));

    let m2 = model("m2.uam");
    let (code, doc) = structured(&["eval", path(&m2), "--expr", "K(up(Sb,{b1}))"]);
    assert_eq!(code, 0);
    assert_eq!(doc["base"], serde_json::json!(["b1"]));
}

#[test]
fn equiv_checks_every_event() {
    let (code, doc) = structured(&["equiv", path(&model("m2.uam"))]);
    assert_eq!(code, 0);
    // One empty and one nonempty event on {a1}, four on {b1, b2}.
    assert_eq!(doc["events"], 2 + 4);
    assert_eq!(doc["mismatches"], serde_json::json!([]));

    let (code, _) = structured(&["equiv", path(&model("diamond.uam")), "--max-states-per-space", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn validate_exit_codes() {
    for name in ["m1.uam", "m2.uam", "chain3.uam", "diamond.uam"] {
        let (code, doc) = structured(&["validate", path(&model(name))]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(doc["ok"], true);
    }
    let (code, doc) = structured(&["validate", path(&model("broken.uam"))]);
    assert_eq!(code, 1);
    let props = doc["possibility"]["properties"].as_array().unwrap();
    let confinement = props
        .iter()
        .find(|p| p["property"] == "Confinement")
        .unwrap();
    assert_eq!(confinement["witness"]["states"][0], "b1");
}

#[test]
fn parse_errors_use_file_line_col() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.uam");
    std::fs::write(&bad, "space Sa = { a1 }\nspace Sb = { b1, b2 }\norder Sa < Sb\nproject Sb -> Sa { b1: a1 }\n").unwrap();
    let out = uam(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(
        err.lines().next().unwrap(),
        format!("{}:4:1: partial-projection: partial projection Sb→Sa: b2 unmapped", bad.display())
    );

    let out = uam(&["eval", path(&model("m1.uam")), "--expr", "K(up(Sb,{zz}))"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("<expr>:1:10: unknown-identifier:"));

    let out = uam(&["validate", dir.path().join("missing.uam").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_reports_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let chain = model("chain3.uam");
    let out = uam(&["suite", path(&chain), "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let results = doc["results"].as_array().unwrap();
    assert!(results.iter().all(|r| r["verdict"]["status"] == "pass"));

    let (code, doc) = structured(&["suite", path(&chain), "--claims", "Prop1,Folk.negation-complement"]);
    assert_eq!(code, 1);
    let folk = &doc["results"][1];
    assert_eq!(folk["claim"], "Folk.negation-complement");
    assert_eq!(folk["verdict"]["status"], "fail");

    let (code, _) = structured(&["suite", path(&chain), "--claims", "Prop9"]);
    assert_eq!(code, 2);
}

#[test]
fn gen_writes_canonical_models() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.uam");
    let b = dir.path().join("b.uam");
    for out in [&a, &b] {
        let o = uam(&["gen", "--seed", "7", "--shape", "diamond", "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let (code, _) = structured(&["validate", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, _) = structured(&["derive-pi", a.to_str().unwrap()]);
    assert_eq!(code, 0);

    let o = uam(&["gen", "--max-spaces", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fuzz_finds_the_folk_counterexample() {
    let (code, doc) = structured(&["fuzz", "--claim", "Folk.negation-complement", "--trials", "10"]);
    assert_eq!(code, 1);
    assert!(doc["counterexample"]["trial"].as_u64().unwrap() < 10);
    let (code, doc) = structured(&["fuzz", "--claim", "Prop2.iii", "--trials", "30"]);
    assert_eq!(code, 0);
    assert!(doc["counterexample"].is_null());
}
