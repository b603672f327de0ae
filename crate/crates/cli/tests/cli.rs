use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fmnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmnc")).args(args).env_remove("FMNC_BUDGET").output().expect("spawn fmnc")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn validator() -> jsonschema::Validator {
    let schema: Value =
        serde_json::from_str(include_str!("../schemas/report.schema.json")).expect("schema parses");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(report: &Value) {
    let v = validator();
    let errors: Vec<String> = v.iter_errors(report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

const GRID2: &str = r#"{"kind": "c-grid", "dim": 2, "m": 2, "params": {"step": 0.5}}"#;

#[test]
fn counterexample_reports_the_strict_violation() {
    let out = fmnc(&["counterexample", "--p", "0.5", "--lambda", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_valid(&r);
    let c = r["checks"].as_array().unwrap().iter().find(|c| c["id"] == "counterexample").unwrap();
    assert!((c["details"]["lhs"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((c["details"]["rhs"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(c["details"]["violated"], true);
}

#[test]
fn gauge_metric_suite_passes_with_tight_margins() {
    let out = fmnc(&["suite", "metric", "--mode", "gauge"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_valid(&r);
    for c in r["checks"].as_array().unwrap() {
        // a rollup with nothing asserted carries a -inf margin, written as null
        if let (Some(m), true) = (c["margin"].as_f64(), c["tolerance"].is_number()) {
            assert!(m <= 1e-12, "{c}");
        }
    }
}

#[test]
fn empty_input_directory_is_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let out = fmnc(&["suite", "all", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_descriptors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"kind": "c-grid", "dim": 0, "m": 1, "params": {"step": 1}}"#);
    assert_eq!(fmnc(&["space", "describe", "--space", &bad]).status.code(), Some(2));
    let garbage = write(dir.path(), "garbage.json", "{not json");
    assert_eq!(fmnc(&["space", "describe", "--space", &garbage]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    let out = fmnc(&["space", "describe", "--space", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));
    assert_eq!(fmnc(&["suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn failed_assertion_exits_one_and_prints_the_witness() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(dir.path(), "op.json", r#"{"kind": "affine-contraction", "lambda": 0.5, "shift": [0.1, -0.1]}"#);
    let m0 = write(
        dir.path(),
        "m0.json",
        &format!(r#"{{"space": {GRID2}, "points": [[-1, -1], [1, -1], [-1, 1], [1, 1]]}}"#),
    );
    let ok = fmnc(&["fixpoint", "darbo", "--op", &op, "--m0", &m0]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let r = json(&ok);
    assert_valid(&r);
    let x = r["checks"][0]["witness"].as_array().unwrap();
    assert!((x[0].as_f64().unwrap() - 0.2).abs() < 1e-5);

    let short = fmnc(&["fixpoint", "darbo", "--op", &op, "--m0", &m0, "--max-iter", "1"]);
    assert_eq!(short.status.code(), Some(1));
    let err = String::from_utf8_lossy(&short.stderr);
    assert!(err.contains("fixpoint.darbo") && err.contains("witness"), "{err}");
}

#[test]
fn identical_seeds_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = fmnc(&["--seed", "7", "--out", path.to_str().unwrap(), "suite", "mnc"]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    fmnc(&["--seed", "8", "--out", c.to_str().unwrap(), "suite", "mnc"]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn csv_has_one_row_per_check() {
    let js = json(&fmnc(&["suite", "counterexample"]));
    let csv = fmnc(&["--format", "csv", "suite", "counterexample"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("check,margin,tolerance,verdict"));
    assert_eq!(lines.count(), js["checks"].as_array().unwrap().len());
}

#[test]
fn budget_flag_overrides_the_environment() {
    let from_env = Command::new(env!("CARGO_BIN_EXE_fmnc"))
        .args(["suite", "counterexample"])
        .env("FMNC_BUDGET", "1234")
        .output()
        .unwrap();
    assert_eq!(json(&from_env)["config"]["budget"], 1234);
    let from_flag = Command::new(env!("CARGO_BIN_EXE_fmnc"))
        .args(["--budget", "99", "suite", "counterexample"])
        .env("FMNC_BUDGET", "1234")
        .output()
        .unwrap();
    assert_eq!(json(&from_flag)["config"]["budget"], 99);
}

#[test]
fn single_commands_emit_valid_reports() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "space.json", GRID2);
    let cloud = write(
        dir.path(),
        "cloud.json",
        &format!(r#"{{"space": {GRID2}, "points": [[0, 0], [1, 0], [0, 1], [0.2, 0.3]]}}"#),
    );
    let trials = write(
        dir.path(),
        "trials.json",
        &format!(r#"{{"space": {GRID2}, "trials": [[[0, 0], [1, 0], [0, 1]], [[0.5, 0.5], [-0.5, 0.2]]]}}"#),
    );
    let half = write(dir.path(), "half.json", r#"{"kind": "affine-contraction", "lambda": 0.5, "shift": [0, 0]}"#);
    let runs: Vec<Vec<&str>> = vec![
        vec!["space", "describe", "--space", &space],
        vec!["space", "seminorm", "--space", &space, "--k", "1", "--x", "0.5,-2"],
        vec!["metric", "eval", "--space", &space, "--x", "0,0", "--y", "0.25,-0.5"],
        vec!["metric", "audit", "--space", &space, "--samples", "100"],
        vec!["metric", "audit", "--mode", "paper", "--samples", "50"],
        vec!["convexity", "check", "--which", "tcs", "--space", &space, "--samples", "100"],
        vec!["convexity", "check", "--which", "tmcs", "--space", &space, "--samples", "100"],
        vec!["convexity", "check", "--which", "stability", "--space", &space, "--samples", "20"],
        vec!["convexity", "check", "--which", "P", "--space", &space, "--samples", "100"],
        vec!["convexity", "check", "--which", "Q", "--space", &space],
        vec!["alpha", "bounds", "--cloud", &cloud, "--eps-grid", "1,0.5,0.25,0.125", "--centers", "2"],
        vec!["alpha", "bounds", "--cloud", &cloud, "--eps-grid", "1,0.5,0.25"],
        vec!["alpha", "co-transfer", "--cloud", &cloud, "--eta", "0.5", "--eps", "0.1", "--resolution", "4"],
        vec!["fixpoint", "sadovskii", "--op", &half, "--trials", &trials],
    ];
    for args in runs {
        let out = fmnc(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_valid(&json(&out));
    }
}

#[test]
fn gauge_distance_of_the_sup_grid_matches_hand_value() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "space.json", GRID2);
    let out = fmnc(&["metric", "eval", "--space", &space, "--x", "0,0", "--y", "0.25,-0.5"]);
    let d = json(&out)["checks"][0]["details"]["distance"].as_f64().unwrap();
    assert_eq!(d, 0.5);
}
