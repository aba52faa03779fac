use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_avoidant-approx"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> i32 {
    let out = bin().args(args).output().unwrap();
    out.status.code().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn approximate(config: &Path, out: &Path, extra: &[&str]) -> i32 {
    let mut args = vec!["approximate", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn approximate_two_discs() {
    let dir = TempDir::new().unwrap();
    let code = approximate(&configs().join("two_discs_exp.json"), dir.path(), &["--seed", "7"]);
    assert_eq!(code, 0);
    let report = read_json(&dir.path().join("report.json"));
    assert_eq!(report["schema"], "avoidant-approx/1");
    assert_eq!(report["certified"], true);
    assert_eq!(report["seed"], 7);
    assert_eq!(report["dense_verification"]["passed"], true);
    assert!(report["report"]["final_sup_error"].as_f64().unwrap() < 0.1);
    assert!(dir.path().join("polynomial.json").exists());
    let csv = fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    assert!(csv.starts_with("re,im,tag"));
}

#[test]
fn approximate_is_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let config = configs().join("arc_transcendental.json");
    assert_eq!(approximate(&config, a.path(), &["--keep-iterates"]), 0);
    assert_eq!(approximate(&config, b.path(), &["--keep-iterates"]), 0);
    for name in ["report.json", "polynomial.json", "samples.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs"
        );
    }
    let report = read_json(&a.path().join("report.json"));
    assert!(report["report"]["avoid_report"]["iterates_kept"].is_array());
}

#[test]
fn interior_violation_reports_stage() {
    let dir = TempDir::new().unwrap();
    let code = approximate(&configs().join("interior_violation.json"), dir.path(), &[]);
    assert_eq!(code, 1);
    let diag = read_json(&dir.path().join("error.json"));
    assert_eq!(diag["schema"], "avoidant-approx/1");
    assert_eq!(diag["error"]["stage"], "estimate_delta");
    assert_eq!(diag["error"]["kind"], "DeltaNotPositive");
}

#[test]
fn malformed_config_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{ \"function\": ").unwrap();
    assert_eq!(approximate(&path, &dir.path().join("out"), &[]), 2);
    fs::write(&path, r#"{"function":{"kind":"identity"},"set":{"constructor":"hexagon"},"forbidden":{"source":"explicit","values":[]},"eps":0.1,"mode":"theorem1_discs"}"#).unwrap();
    assert_eq!(approximate(&path, &dir.path().join("out"), &[]), 2);
    assert_eq!(approximate(&dir.path().join("missing.json"), &dir.path().join("out"), &[]), 2);
    assert_eq!(run(&["approximate"]), 2);
}

#[test]
fn verify_dense_and_violations() {
    let dir = TempDir::new().unwrap();
    let config = configs().join("two_discs_exp.json");
    assert_eq!(approximate(&config, dir.path(), &[]), 0);
    let poly = dir.path().join("polynomial.json");
    let verify = |poly: &Path, extra: &[&str]| {
        let out = dir.path().join("verify");
        let mut args = vec![
            "verify",
            "--config",
            config.to_str().unwrap(),
            "--polynomial",
            poly.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        (run(&args), read_json(&out.join("verify.json")))
    };

    let (code, doc) = verify(&poly, &["--dense-verify", "10"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["dense_verify_factor"], 10);

    // tighter eps than the achieved error
    let achieved = doc["verification"]["sup_error"].as_f64().unwrap();
    let (code, _) = verify(&poly, &["--eps", &format!("{}", 0.5 * achieved)]);
    assert_eq!(code, 1);

    // shift p so that it takes the value 1 at a sample: p(z) - p(z0) + 1
    let mut p: Value = read_json(&poly);
    let coeffs = p.as_array_mut().unwrap();
    let z0 = (-1.9f64, 0.0f64);
    let mut value = (0.0, 0.0);
    for c in coeffs.iter().rev() {
        let (re, im) = (c[0].as_f64().unwrap(), c[1].as_f64().unwrap());
        value = (value.0 * z0.0 - value.1 * z0.1 + re, value.0 * z0.1 + value.1 * z0.0 + im);
    }
    coeffs[0][0] = Value::from(coeffs[0][0].as_f64().unwrap() - value.0 + 1.0);
    coeffs[0][1] = Value::from(coeffs[0][1].as_f64().unwrap() - value.1);
    let bad = dir.path().join("bad_poly.json");
    fs::write(&bad, serde_json::to_string(&p).unwrap()).unwrap();
    let (code, doc) = verify(&bad, &["--eps", "100"]);
    assert_eq!(code, 1);
    assert_eq!(doc["passed"], false);
}

#[test]
fn demo_obstruction_runs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("demo");
    assert_eq!(run(&["demo-obstruction", "--out", out.to_str().unwrap()]), 0);
    let doc = read_json(&out.join("obstruction.json"));
    assert_eq!(doc["schema"], "avoidant-approx/1");
    assert_eq!(doc["report"]["obstructed"], true);
    assert_eq!(doc["report"]["analysis"]["winding_difference"].as_i64().unwrap().abs(), 1);
    for name in ["gamma.csv", "p_curve.csv", "loop.csv"] {
        assert!(out.join(name).exists());
    }

    let custom = dir.path().join("custom");
    let code = run(&["demo-obstruction", "--a1", "0,0", "--a2", "1,0", "--out", custom.to_str().unwrap()]);
    assert_eq!(code, 0);

    let big = dir.path().join("big");
    assert_eq!(run(&["demo-obstruction", "--eps", "5", "--out", big.to_str().unwrap()]), 2);
}
