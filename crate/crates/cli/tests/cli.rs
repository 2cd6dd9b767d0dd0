use std::process::{Command, Output};

use serde_json::Value;

fn slopekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slopekit"))
        .args(args)
        .env_remove("SLOPEKIT_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_worked_example() {
    let o = slopekit(&["check", "p=2", "u=1", "s=1", "f=x^3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("supersingular: true"));
    assert!(text.contains("first slope: 1/2"));
    assert!(text.contains("verdict: PASS"));
}

#[test]
fn newton_json_shape() {
    let o = slopekit(&["--json", "newton", "p=2 u=1 s=1 f=x^7"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["coeffs", "first_slope", "slopes", "supersingular", "vertices"]);
    assert_eq!(v["first_slope"], "1/3");
    assert_eq!(v["coeffs"][3], "-2");
    assert_eq!(v["vertices"][1], serde_json::json!([3, "1/1"]));
}

#[test]
fn bounds_usage_errors() {
    assert_eq!(slopekit(&["bounds", "2", "1", "1", "15", "0"]).status.code(), Some(2));
    assert_eq!(slopekit(&["bounds", "4", "1", "1", "15", "3"]).status.code(), Some(2));
    assert_eq!(slopekit(&["bounds"]).status.code(), Some(2));
    let o = slopekit(&["--json", "bounds", "2", "1", "1", "15", "7"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["hw_classic"], "154");
    assert_eq!(v["hw_improved"], "152");
}

#[test]
fn malformed_curve_reports_column() {
    let o = slopekit(&["lpoly", "p=2 u=1 s=1 f=x^3+2*x"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("column 19"), "{err}");
}

#[test]
fn budget_flag_and_env() {
    let o = slopekit(&["--budget", "4", "lpoly", "p=2 u=2 s=2 f=x^3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_slopekit"))
        .args(["lpoly", "p=2 u=2 s=2 f=x^3"])
        .env("SLOPEKIT_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_slopekit"))
        .args(["--budget", "100000", "lpoly", "p=2 u=2 s=2 f=x^3"])
        .env("SLOPEKIT_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn examples_flag_third() {
    let o = slopekit(&["--json", "examples"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let st: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["status"].as_str().unwrap()).collect();
    assert_eq!(st, ["PASS", "PASS", "FLAG"]);
    assert_eq!(v[0]["computed"]["hw_improved"], "152");
}

#[test]
fn tiling_and_bijection() {
    let o = slopekit(&["--json", "tiling", "7", "1,3", "2", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tilde_s"], 2);
    assert_eq!(v["bijection"]["holds"], true);
    let o = slopekit(&["--json", "tiling", "5", "2", "2"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tilde_s"], Value::Null);
}

#[test]
fn series_verify_selectors() {
    let o = slopekit(&["series-verify", "y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("y        PASS"));
    let o = slopekit(&["series-verify", "REL"]);
    assert_eq!(o.status.code(), Some(0));
    let o = slopekit(&["--json", "series-verify", "cmod"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["passed"], false);
    assert!(v[0]["first_failure"].as_str().unwrap().contains("C_3"));
}

#[test]
fn scan_is_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.jsonl");
    let out = out.to_str().unwrap();
    let o = slopekit(&["scan", "--family", "p=3 d=4", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read_to_string(out).unwrap();
    assert_eq!(first.lines().count(), 27);
    for line in first.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["verdicts"]["violations"].as_array().unwrap().is_empty());
    }
    let o = slopekit(&["scan", "--family", "p=3 d=4", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("27 skipped, 0 written"));
    assert_eq!(std::fs::read_to_string(out).unwrap(), first);
}

#[test]
fn scan_rejects_bad_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jsonl");
    let o = slopekit(&["scan", "--family", "random:x", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let o = slopekit(&["--json", "lpoly", "p=2 u=1 s=1 f=x^3"]);
    assert!(!stdout(&o).contains("elapsed_ms"));
    let o = slopekit(&["--json", "--timing", "lpoly", "p=2 u=1 s=1 f=x^3"]);
    assert!(stdout(&o).contains("elapsed_ms"));
}
