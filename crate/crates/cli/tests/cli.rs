use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use causalchop::chop::multi::Certificate;
use causalchop::wick::WickExpression;
use serde_json::{json, Value};
use tempfile::TempDir;

const CYCLIC: &str = include_str!("../../core/tests/fixtures/cyclic_triple.json");

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_causalchop"));
    c.env_remove("CAUSALCHOP_JOBS");
    c
}

struct Ws {
    dir: TempDir,
}

impl Ws {
    fn new() -> Self {
        Ws { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn run(args: &[&str], input: &Path) -> Output {
    bin().args(args).arg("--input").arg(input).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout {:?} stderr {:?}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn strings(list: &[([i64; 4], [i64; 4])]) -> String {
    let s: Vec<Value> = list.iter().map(|(x, e)| json!({"x": x, "e": e})).collect();
    json!({"dimension": 4, "strings": s}).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn classify_spacelike_separated_pair() {
    let ws = Ws::new();
    let p = ws.file("c.json", &strings(&[([0, 0, 0, 0], [0, 1, 0, 0]), ([0, 0, 5, 0], [0, 1, 0, 0])]));
    let out = run(&["classify"], &p);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outputs"]["compare"][0][1], "SpacelikeSeparated");
    assert_eq!(r["outputs"]["direction_classes"][0], "Spacelike");
    assert_eq!(r["verification"], "not_applicable");
}

#[test]
fn classify_cyclic_fixture() {
    let ws = Ws::new();
    let p = ws.file("c.json", CYCLIC);
    let r = report(&run(&["classify"], &p));
    let m = &r["outputs"]["compare"];
    assert_eq!(m[0][1], "FirstLater");
    assert_eq!(m[1][2], "FirstLater");
    assert_eq!(m[0][2], "Incomparable");
}

#[test]
fn malformed_rational_names_the_field() {
    let ws = Ws::new();
    let p = ws.file("c.json", r#"{"dimension": 2, "strings": [{"x": [0, "1/0"], "e": [0, 1]}]}"#);
    let out = run(&["classify"], &p);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("strings[0].x[1]"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_one() {
    let ws = Ws::new();
    let p = ws.file("c.json", CYCLIC);
    assert_eq!(run(&["chop"], &p).status.code(), Some(1));
    assert_eq!(run(&["chop", "--pair", "0", "7"], &p).status.code(), Some(1));
    assert_eq!(bin().arg("bogus").output().unwrap().status.code(), Some(1));
    assert_eq!(run(&["classify"], &ws.path("missing.json")).status.code(), Some(1));
}

#[test]
fn incomparable_pair_is_cut_and_verifies() {
    let ws = Ws::new();
    let p = ws.file("c.json", &strings(&[([2, 0, 0, 1], [-3, 0, 5, 0]), ([0, 0, 0, 0], [0, 0, 1, 0])]));
    let cert = ws.path("cert.json");
    let out = bin().args(["chop", "--pair", "0", "1", "--input"]).arg(&p).arg("--output").arg(&cert).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(r["outputs"]["result"]["kind"], "cut");
    assert_eq!(r["outputs"]["result"]["cut"], "1/2");
    assert_eq!(r["verification"], "pass");
    let v = run(&["verify"], &cert);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(report(&v)["outputs"]["kind"], "pair");
}

#[test]
fn diagonal_configuration_exits_two() {
    let ws = Ws::new();
    let p = ws.file(
        "c.json",
        &strings(&[([0, 0, 0, 0], [0, 1, 0, 0]), ([0, 0, 3, 0], [0, 0, 1, 0]), ([0, 0, 0, 0], [0, 0, 1, 0])]),
    );
    let out = run(&["chop", "--all"], &p);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("strings 0 and 2"), "{}", stderr(&out));
    let out = run(&["chop", "--pair", "1", "2"], &p);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("strings 1 and 2"), "{}", stderr(&out));
    assert_eq!(run(&["wick"], &p).status.code(), Some(2));
}

#[test]
fn cyclic_fixture_chops_and_round_trips() {
    let ws = Ws::new();
    let p = ws.file("c.json", CYCLIC);
    let out = run(&["chop", "--all"], &p);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["verification"], "pass");
    assert_eq!(r["outputs"]["verification"]["all_pass"], true);
    let cert_json = &r["outputs"]["certificate"];
    let cert: Certificate = serde_json::from_value(cert_json.clone()).unwrap();
    assert_eq!(&serde_json::to_value(&cert).unwrap(), cert_json);
    assert!(cert.cuts.iter().any(|c| c.len() > 1));

    let saved = ws.file("cert.json", &String::from_utf8(out.stdout).unwrap());
    assert_eq!(run(&["verify"], &saved).status.code(), Some(0));
}

#[test]
fn tampered_certificate_fails_verification() {
    let ws = Ws::new();
    let p = ws.file("c.json", CYCLIC);
    let mut r = report(&run(&["chop", "--all"], &p));
    for entry in r["outputs"]["certificate"]["latest"].as_array_mut().unwrap() {
        let k = entry["index"].as_u64().unwrap();
        entry["index"] = json!((k + 1) % 3);
    }
    let bad = ws.file("bad.json", &r.to_string());
    let out = run(&["verify"], &bad);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(report(&out)["verification"], "fail");
}

#[test]
fn refinement_limit_exits_three() {
    let ws = Ws::new();
    // needs several refinement rounds
    let p = ws.file(
        "c.json",
        r#"{"dimension": 3, "strings": [
            {"x": [3, 2, 4], "e": [2, -2, -2]},
            {"x": [-3, -4, -4], "e": [2, 1, 2]},
            {"x": [1, 2, -3], "e": [1, -2, 2]}]}"#,
    );
    let out = run(&["chop", "--all", "--refine-limit", "2"], &p);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("refinement limit"));
    let out = run(&["chop", "--all"], &p);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(report(&out)["verification"], "pass");
}

#[test]
fn wick_closed_term_counts() {
    let ws = Ws::new();
    let two = ws.file("two.json", &strings(&[([0, 0, 0, 0], [0, 1, 0, 0]), ([0, 0, 5, 0], [0, 1, 0, 0])]));
    let r = report(&run(&["wick", "--mode", "closed"], &two));
    assert_eq!(r["outputs"]["terms"], 2);
    assert_eq!(r["outputs"]["text"], ":φ(1)φ(2): + ⟨T φ(1)φ(2)⟩");
    let expr: WickExpression = serde_json::from_value(r["outputs"]["expression"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&expr).unwrap(), r["outputs"]["expression"]);

    let four = ws.file(
        "four.json",
        &strings(&[
            ([0, 0, 0, 0], [0, 1, 0, 0]),
            ([0, 0, 5, 0], [0, 1, 0, 0]),
            ([0, 0, 0, 5], [0, 1, 0, 0]),
            ([0, 0, 5, 5], [0, 1, 0, 0]),
        ]),
    );
    assert_eq!(report(&run(&["wick"], &four))["outputs"]["terms"], 10);
}

#[test]
fn wick_compare_on_cyclic_fixture() {
    let ws = Ws::new();
    let p = ws.file("c.json", CYCLIC);
    let out = run(&["wick", "--mode", "compare", "--jobs", "2"], &p);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["outputs"]["equal"], true);
    let saved = ws.file("w.json", &r.to_string());
    assert_eq!(run(&["verify"], &saved).status.code(), Some(0));
}

#[test]
fn stratum_examples() {
    let ws = Ws::new();
    let cases = [
        (strings(&[([1, 2, 3, 4], [0, 1, 0, 0]), ([1, 2, 3, 4], [0, 0, 1, 0])]), "Delta2_0", json!(4)),
        (strings(&[([0, -1, 0, 0], [0, 1, 0, 0]), ([0, 0, -1, 0], [0, 0, 1, 0])]), "Delta2_2", json!(2)),
        (strings(&[([0, 0, 0, 0], [0, 1, 0, 0]), ([0, 0, 5, 0], [0, 1, 0, 0])]), "OffDiagonal", Value::Null),
    ];
    for (k, (text, name, codim)) in cases.into_iter().enumerate() {
        let p = ws.file(&format!("s{k}.json"), &text);
        let r = report(&run(&["stratum"], &p));
        assert_eq!(r["outputs"]["stratum"], name);
        assert_eq!(r["outputs"]["codimension"], codim);
    }
}

#[test]
fn reports_are_deterministic() {
    let ws = Ws::new();
    let p = ws.file("c.json", CYCLIC);
    let a = run(&["chop", "--all"], &p);
    let b = bin().args(["chop", "--all", "--input"]).arg(&p).env("CAUSALCHOP_JOBS", "3").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let h = report(&a)["input_sha256"].as_str().unwrap().to_string();
    assert_eq!(h.len(), 64);
}

#[test]
fn selftest_passes_with_seed() {
    let out = bin().args(["selftest", "--seed", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["outputs"]["seed"], 7);
    assert!(r["outputs"]["suites"].as_array().unwrap().iter().all(|s| s["pass"] == true));
}
