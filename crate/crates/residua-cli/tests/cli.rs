//! End-to-end tests of the binary: exit codes, report determinism and the
//! documented examples.

use std::path::PathBuf;
use std::process::{Command, Output};

fn residua(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residua"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn algebra_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("residua-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const DUAL_NUMBERS: &str = r#"{
  "dim": 2,
  "basis": ["1", "eps"],
  "unit": ["1", "0"],
  "mul": [
    [0, 0, ["1", "0"]],
    [0, 1, ["0", "1"]],
    [1, 0, ["0", "1"]],
    [1, 1, ["0", "0"]]
  ],
  "grading": [0, 1]
}"#;

#[test]
fn residue_three_way_agreement() {
    let out = residua(&["residue", "--vars", "t", "--f", "t^-1", "--g", "t", "--method", "all"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["methods"]["tate"], "1");
    assert_eq!(report["methods"]["symbol"], "1");
    assert_eq!(report["methods"]["oracle"], "1");
    assert_eq!(report["verdict"], "AGREE");
}

#[test]
fn residue_single_method_and_bad_method() {
    let out = residua(&["residue", "--vars", "t", "--f", "3*t^-2", "--g", "t^2"]);
    assert_eq!(out.status.code(), Some(0));
    let bad = residua(&["residue", "--vars", "t", "--f", "t", "--g", "t", "--method", "float"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one_and_hyphen_values_parse() {
    // A clap usage error is a validation error: exit 1, not 2.
    let out = residua(&["residue", "--vars", "t", "--f", "t"]);
    assert_eq!(out.status.code(), Some(1));
    // Expression and window values may start with a hyphen.
    let out = residua(&["residue", "--vars", "t", "--f", "-t^-1", "--g", "t"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["methods"]["oracle"], "-1");
    assert_eq!(report["verdict"], "AGREE");
}

#[test]
fn parse_errors_exit_one() {
    let out = residua(&["residue", "--vars", "t", "--f", "t +* 2", "--g", "t"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse error"), "stderr: {err}");
    // Unknown variable is a validation error.
    let out = residua(&["residue", "--vars", "t", "--f", "q", "--g", "t"]);
    assert_eq!(out.status.code(), Some(1));
    // A form where a scalar is expected.
    let out = residua(&["residue", "--vars", "t", "--f", "d(t)", "--g", "t"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cousin_p1_quadratic_point() {
    let out = residua(&["cousin-p1", "--form", "d(x) * (x^2+1)^-1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["sum"], "0");
    let entries = report["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert!(entries.iter().all(|e| e["residue"] == "0"));
}

#[test]
fn cousin_p1_simple_poles() {
    let out = residua(&["cousin-p1", "--form", "(x^2 - x)^-1 * d(x)"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["sum"], "0");
    let residues: Vec<&str> = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["residue"].as_str().unwrap())
        .collect();
    assert!(residues.contains(&"-1"));
    assert!(residues.contains(&"1"));
}

#[test]
fn hh_dual_numbers() {
    let path = algebra_file("dual_numbers.alg", DUAL_NUMBERS);
    let out = residua(&["hh", "--algebra", path.to_str().unwrap(), "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["hh"]["0"], 2);
    assert_eq!(report["hh"]["1"], 1);
}

#[test]
fn hh_graded_window() {
    let path = algebra_file("dual_numbers_graded.alg", DUAL_NUMBERS);
    let out = residua(&[
        "hh",
        "--algebra",
        path.to_str().unwrap(),
        "--max-degree",
        "1",
        "--grade-window",
        "0..1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["hh_graded"]["0"]["0"], 1);
    assert_eq!(report["hh_graded"]["0"]["1"], 1);
    assert_eq!(report["hh_graded"]["1"]["1"], 1);
}

#[test]
fn hh_rejects_malformed_files() {
    let path = algebra_file("broken.alg", "{\"dim\": 2}");
    let out = residua(&["hh", "--algebra", path.to_str().unwrap(), "--max-degree", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn localcoh_dimension_table() {
    let out = residua(&[
        "localcoh", "--ring", "x,y", "--support", "x,y", "--module", "omega^2", "--window", "-4..0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // Ω² shifts the grading by two: x⁻¹y⁻¹ dx∧dy sits in degree 0 and the
    // degree -1 piece is spanned by x⁻¹y⁻² and x⁻²y⁻¹ times dx∧dy.
    assert_eq!(report["dims"]["2"]["0"], 1);
    assert_eq!(report["dims"]["2"]["-1"], 2);
    assert_eq!(report["dims"]["0"]["-1"], 0);
    assert_eq!(report["dims"]["1"]["-1"], 0);
}

#[test]
fn residue2_with_pinned_sign() {
    let out = residua(&[
        "residue2", "--vars", "t1,t2", "--f", "t1^-1 * t2^-1", "--g1", "t1", "--g2", "t2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["methods"]["symbol"], "1");
    assert_eq!(report["methods"]["oracle"], "1");
    assert_eq!(report["verdict"], "AGREE");
}

#[test]
fn audit_symbol_dumps_trace() {
    let dir = std::env::temp_dir().join("residua-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let trace_path = dir.join("trace.json");
    let out = residua(&[
        "audit-symbol",
        "--vars",
        "t1,t2",
        "--f",
        "t1^-2*t2^-1",
        "--g1",
        "t1^2",
        "--g2",
        "t2",
        "--dump-trace",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert_eq!(trace["value"], "2");
    assert_eq!(trace["oracle"], "2");
    assert_eq!(trace["agree"], true);
    // Intermediate chains are recorded for every boundary step.
    assert_eq!(trace["steps"].as_array().unwrap().len(), 3);
}

#[test]
fn reports_are_byte_deterministic() {
    let args = [
        vec!["residue", "--vars", "t", "--f", "t^-3 + 2*t^-1 + 5", "--g", "t^3 - t"],
        vec!["cousin-p1", "--form", "(x^3 - x - 1)^-1 * d(x)"],
        vec![
            "localcoh", "--ring", "x,y", "--support", "x,y", "--module", "R", "--window", "-3..0",
        ],
    ];
    for argv in &args {
        let a = residua(argv);
        let b = residua(argv);
        assert_eq!(a.stdout, b.stdout, "nondeterministic report for {argv:?}");
    }
}
