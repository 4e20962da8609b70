mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::qasm_grammar::check;
use common::EXPERIMENT_PROBS;
use serde_json::Value;

fn qsprep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsprep"))
        .args(args)
        .output()
        .expect("run qsprep")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_experiment(dir: &Path) -> String {
    let amps: Vec<f64> = EXPERIMENT_PROBS.iter().map(|p| p.sqrt()).collect();
    let path = dir.join("v8.json");
    std::fs::write(&path, serde_json::json!({ "amplitudes": amps }).to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn write_sparse(dir: &Path) -> String {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let path = dir.join("sparse.json");
    let doc = serde_json::json!({
        "n": 3,
        "entries": [{"index": 4, "amp": [h, 0.0]}, {"index": 5, "amp": h}]
    });
    std::fs::write(&path, doc.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn synth_split_two_emits_five_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_experiment(dir.path());
    let o = qsprep(&["synth", "--input", &input, "--split", "2", "--emit", "qasm"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("qreg q[5];"));
    check(&text).unwrap();
    let report: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(report["width"], 5);
}

#[test]
fn synth_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_experiment(dir.path());
    let out = dir.path().join("c.json");
    let o = qsprep(&[
        "synth", "--input", &input, "--split", "1", "--emit", "json", "--keep-high-level", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["width"], 7);
    let c = qsprep::circuit::Circuit::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(c.width(), 7);
    assert_eq!(c.count("cswap"), 4);
}

#[test]
fn simulate_exact_auto_split() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_experiment(dir.path());
    let o = qsprep(&["simulate", "--input", &input, "--split", "auto", "--shots", "0"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["s"], 3);
    assert!(r["mae"].as_f64().unwrap() < 1e-9);
    assert!(r["overlap"].as_f64().unwrap() > 1.0 - 1e-9);
}

#[test]
fn simulate_with_shots_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_experiment(dir.path());
    let args = ["simulate", "--input", &input, "--split", "1", "--shots", "4096", "--seed", "5"];
    let a = qsprep(&args);
    let b = qsprep(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["seed"], 5);
    assert!(r["overlap"].is_null());
}

#[test]
fn sparse_input_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sparse(dir.path());
    let o = qsprep(&["simulate", "--input", &input, "--split", "bottom-up"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["method"], "sparse_bidirectional");
    assert_eq!(r["width"], 3);
    let probs: Vec<f64> = r["marginals"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((probs[4] - 0.5).abs() < 1e-9 && (probs[5] - 0.5).abs() < 1e-9);
}

#[test]
fn analyze_three_qubits() {
    let o = qsprep(&["analyze", "--n", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let widths: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(widths, vec!["7", "5", "3"]);
}

#[test]
fn sweep_csv_is_deterministic() {
    let args = ["sweep", "--n-min", "3", "--n-max", "4", "--trials", "2", "--seed", "3"];
    let a = qsprep(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, qsprep(&args).stdout);
    let text = stdout(&a);
    assert!(text.starts_with("n,s,qubits,abstract_depth,native_depth,cx_count\n"));
    assert_eq!(text.lines().count(), 1 + 3 + 4);
}

#[test]
fn every_method_emits_parseable_qasm() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_experiment(dir.path());
    for method in ["bidirectional", "top-down", "bottom-up", "sparse-bidirectional"] {
        for split in ["1", "2", "3"] {
            let o = qsprep(&["synth", "--input", &input, "--method", method, "--split", split]);
            assert!(o.status.success(), "{method} {split}");
            check(&stdout(&o)).unwrap();
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_experiment(dir.path());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"amplitudes\": [0.0, 0.0]}").unwrap();
    let unnormalized = dir.path().join("un.json");
    std::fs::write(&unnormalized, "{\"amplitudes\": [1.0, 1.0]}").unwrap();

    assert_eq!(qsprep(&["synth", "--input", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(qsprep(&["synth", "--input", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(qsprep(&["synth", "--input", &input, "--split", "9"]).status.code(), Some(1));
    assert_eq!(qsprep(&["synth", "--input", &input, "--split", "sideways"]).status.code(), Some(1));
    assert_eq!(qsprep(&["frobnicate"]).status.code(), Some(1));
    let o = qsprep(&["synth", "--input", unnormalized.to_str().unwrap(), "--no-normalize"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    assert!(qsprep(&["synth", "--input", unnormalized.to_str().unwrap()]).status.success());
}
