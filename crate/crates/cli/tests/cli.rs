//! End-to-end runs of the `spectra` binary on temporary input files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const DIAG: &str = r#"{"n": 2, "entries": [["2", "0"], ["0", "1/2"]]}"#;
const NOT_SPECIAL: &str = r#"{"n": 2, "entries": [["2", "0"], ["0", "1"]]}"#;
const TRIVIAL: &str = r#"{"n": 2, "generators": {"a": [["1", "0"], ["0", "1"]], "b": [["1", "0"], ["0", "1"]]}}"#;
const UNIPOTENT: &str = r#"{"n": 2, "generators": {"a": [["1", "1"], ["0", "1"]]}}"#;
const DIAG_T: &str = r#"{"n": 2, "valuation": "at-infinity",
    "entries": [[{"num": ["0", "1"]}, "0"], ["0", {"num": ["1"], "den": ["0", "1"]}]]}"#;
// a = diag(t, 1/t), b = c·a·c⁻¹ with c = [[1, 1], [1, 2]].
const F2: &str = r#"{"n": 2, "generators": {
    "a": [[{"num": ["0", "1"]}, "0"], ["0", {"num": ["1"], "den": ["0", "1"]}]],
    "b": [[{"num": ["-1", "0", "2"], "den": ["0", "1"]}, {"num": ["1", "0", "-1"], "den": ["0", "1"]}],
          [{"num": ["-2", "0", "2"], "den": ["0", "1"]}, {"num": ["2", "0", "-1"], "den": ["0", "1"]}]]}}"#;
const POLE: &str = r#"{"n": 2, "generators": {
    "a": [[{"num": ["0", "1"], "den": ["-100", "1"]}, "0"], ["0", {"num": ["-100", "1"], "den": ["0", "1"]}]]}}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, body).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

// The expected values are log 2 as printed with 15 significant digits.
#[allow(clippy::approx_constant)]
#[test]
fn jordan_of_diagonal_matrix() {
    let ws = Workspace::new();
    let out = spectra(&["jordan", "--matrix", p(&ws.file("m.json", DIAG))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["v"][0].as_f64().unwrap(), 0.693147180559945);
    assert_eq!(v["v"][1].as_f64().unwrap(), -0.693147180559945);
}

#[allow(clippy::approx_constant)]
#[test]
fn cartan_csv_has_coordinates_then_norm() {
    let ws = Workspace::new();
    let out = spectra(&["cartan", "--matrix", p(&ws.file("m.json", DIAG)), "--format", "csv"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "v1,v2,norm\n0.693147180559945,-0.693147180559945,0.980258143468547\n"
    );
}

#[test]
fn valued_matrix_gives_exact_fractions() {
    let ws = Workspace::new();
    let out = spectra(&["jordan", "--matrix", p(&ws.file("m.json", DIAG_T))]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["v"], serde_json::json!(["1", "-1"]));
    assert_eq!(v["exact"], Value::Bool(true));
}

#[test]
fn trivial_spectrum_is_all_zero_csv() {
    let ws = Workspace::new();
    let out = spectra(&["spectrum", "--rep", p(&ws.file("r.json", TRIVIAL)), "-R", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,v1,v2,norm"));
    let rows: Vec<&str> = lines.collect();
    // 1 + 4 + 12 words on the radius-2 ball of F₂.
    assert_eq!(rows.len(), 17);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(&fields[1..], ["0", "0", "0"], "{row}");
    }
}

#[test]
fn degenerate_free_family_converges() {
    let ws = Workspace::new();
    let f = ws.file("f.json", F2);
    let out = spectra(&["degenerate", "--family", p(&f), "-R", "3", "--samples", "1e2,1e4,1e8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["limit_nonzero"], Value::Bool(true));
    assert_eq!(report["bounded_family"], Value::Bool(false));
    let d: Vec<f64> = report["samples"].as_array().unwrap().iter().map(|s| s["distance"].as_f64().unwrap()).collect();
    assert_eq!(d.len(), 3);
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
}

#[test]
fn degenerate_csv_has_sample_word_columns() {
    let ws = Workspace::new();
    let f = ws.file("f.json", F2);
    let out = spectra(&["degenerate", "--family", p(&f), "-R", "1", "--samples", "1e2,1e4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "s,word,v1,v2,norm,distance");
    assert_eq!(lines.len(), 1 + 2 * 5);
    assert!(lines[1].starts_with("100,1,"));
}

#[test]
fn degenerate_by_lambda_reports_convergence() {
    let ws = Workspace::new();
    let f = ws.file("f.json", F2);
    let out = spectra(&["degenerate", "--family", p(&f), "-R", "1", "--samples", "1e4,1e8", "--mode", "lambda"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    for s in report["samples"].as_array().unwrap() {
        assert_eq!(s["lambda_converged"], Value::Bool(true));
    }
}

#[test]
fn bounded_family_warns_without_failing() {
    let ws = Workspace::new();
    let fam = r#"{"n": 2, "generators": {"a": [["1", {"num": ["0", "1"]}], ["0", "1"]]}}"#;
    let out = spectra(&["degenerate", "--family", p(&ws.file("f.json", fam)), "-R", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["bounded_family"], Value::Bool(true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"warning\":\"bounded_family\""));
}

#[test]
fn tropical_spectrum_of_family() {
    let ws = Workspace::new();
    let out = spectra(&["tropical", "--family", p(&ws.file("f.json", F2)), "-R", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let ab = report["spectrum"].as_array().unwrap().iter().find(|r| r["word"] == "ab").unwrap();
    assert_eq!(ab["v"], serde_json::json!(["2", "-2"]));
}

#[test]
fn lambda_reports_budget_exhaustion() {
    let ws = Workspace::new();
    let out_path = ws.path("l.json");
    let out = spectra(&["lambda", "--rep", p(&ws.file("r.json", UNIPOTENT)), "-o", p(&out_path)]);
    assert_eq!(out.status.code(), Some(4));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["converged"], Value::Bool(false));
    assert!(report["lambda_hat"].as_f64().unwrap() <= 0.05);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda_not_converged"));
}

#[test]
fn lambda_of_diagonal_rep() {
    let ws = Workspace::new();
    let rep = r#"{"n": 2, "generators": {"a": [["2", "0"], ["0", "1/2"]]}}"#;
    let out = spectra(&["lambda", "--rep", p(&ws.file("r.json", rep)), "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let lambda = report["lambda_hat"].as_f64().unwrap();
    assert!((lambda - 2f64.sqrt() * 2f64.ln()).abs() < 1e-4);
    assert_eq!(report["word_bound_violations"], serde_json::json!([]));
}

#[test]
fn malformed_input_exits_2() {
    let ws = Workspace::new();
    let r = ws.file("r.json", TRIVIAL);
    let missing = ws.path("missing.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["jordan", "--matrix", p(&missing)],
        vec!["spectrum", "--rep", p(&r), "-R", "9"],
        vec!["lambda", "--rep", p(&r), "--tol", "1e-12"],
        vec!["lambda", "--rep", p(&r), "--tol", "0.1"],
        vec!["degenerate", "--family", p(&r), "--samples", "2,10"],
        vec!["degenerate", "--family", p(&r), "--samples", "1e4,1e2"],
        vec!["frobnicate"],
    ];
    for args in &cases {
        assert_eq!(spectra(args).status.code(), Some(2), "{args:?}");
    }
    let garbage = ws.file("g.json", "{\"n\": 2,");
    assert_eq!(spectra(&["jordan", "--matrix", p(&garbage)]).status.code(), Some(2));
}

#[test]
fn precondition_violations_exit_3() {
    let ws = Workspace::new();
    assert_eq!(spectra(&["jordan", "--matrix", p(&ws.file("m.json", NOT_SPECIAL))]).status.code(), Some(3));
    let out = spectra(&["degenerate", "--family", p(&ws.file("f.json", POLE)), "--samples", "1e2,1e4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn check_passes_on_fixtures() {
    let out = spectra(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 4);
    assert!(suites.iter().all(|s| s["passed"] == Value::Bool(true)));
}

#[test]
fn output_is_deterministic() {
    let ws = Workspace::new();
    let r = ws.file("r.json", &F2.replacen("{", r#"{"scalar": "ratfunc", "#, 1));
    let f = ws.file("f.json", F2);
    let m = ws.file("m.json", DIAG);
    let runs: Vec<Vec<&str>> = vec![
        vec!["tropical", "--family", p(&f), "-R", "3"],
        vec!["jordan", "--matrix", p(&m)],
        vec!["degenerate", "--family", p(&f), "-R", "2", "--format", "csv"],
        vec!["spectrum", "--rep", p(&r), "-R", "2"],
    ];
    for args in &runs {
        let a = spectra(args);
        let b = spectra(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
