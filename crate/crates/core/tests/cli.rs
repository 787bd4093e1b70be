use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toda-quant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_all_passes_for_the_reference_seed() {
    let out = run(&["verify-all", "--n", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["seed"], 7);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["n"], 3);
    let suites = v["result"]["suites"].as_array().unwrap();
    let names: Vec<&str> = suites.iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["dynamics", "orbit", "quantization", "coherent", "finrep"]);
    assert!(suites.iter().all(|s| s["pass"] == Value::Bool(true)));
}

#[test]
fn spectrum_command_reports_ascending_converged_values() {
    let out = run(&["quantize-spectrum", "--n", "2", "--grid", "2000", "--box", "-12:4", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ev: Vec<f64> = v["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(ev.len(), 5);
    assert!(ev.windows(2).all(|w| w[0] < w[1]));
    assert!(v["result"]["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r.as_f64().unwrap() < 1e-8));
    assert_eq!(v["result"]["chart"], "q");
    assert_eq!(v["result"]["box"][0][0].as_f64(), Some(-12.0));
}

#[test]
fn spectrum_csv_has_comment_header() {
    let out = run(&["quantize-spectrum", "--n", "2", "--grid", "64", "--k", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let comments: Vec<&str> = lines.by_ref().take_while(|l| l.starts_with('#')).collect();
    assert!(comments.iter().any(|l| l.contains("seed: 0")));
    assert!(comments.iter().any(|l| l.contains(env!("CARGO_PKG_VERSION"))));
    assert!(text.lines().nth(comments.len()).unwrap().contains(','));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(run(&["simulate", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["quantize-spectrum", "--box", "4"]).status.code(), Some(2));
    assert_eq!(run(&["quantize-spectrum", "--grid", "4"]).status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify-all", "--n", "4", "--seed", "3"],
        vec!["simulate", "--n", "3", "--seed", "5", "--t-end", "1"],
        vec!["rep-matrix", "--n", "3", "--seed", "2"],
        vec!["coherent-kernel", "--seed", "9"],
    ] {
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        for path in [&a, &b] {
            let mut full = args.clone();
            full.extend(["--output", path.to_str().unwrap()]);
            assert_eq!(run(&full).status.code(), Some(0), "{args:?}");
        }
        let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert!(!x.is_empty());
        assert_eq!(x, y, "{args:?}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"n": 2, "grid": [200], "k": 3, "box": ["-10:3"]}"#).unwrap();
    let out = run(&["quantize-spectrum", "--config", cfg.to_str().unwrap(), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["k"], 2);
    assert_eq!(v["config"]["grid"][0], 200);
    assert_eq!(v["result"]["eigenvalues"].as_array().unwrap().len(), 2);
    assert_eq!(v["result"]["box"][0][0].as_f64(), Some(-10.0));

    std::fs::write(&cfg, r#"{"n": 2, "typo": 1}"#).unwrap();
    assert_eq!(run(&["quantize-spectrum", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn every_subcommand_embeds_seed_and_version() {
    for args in [
        vec!["simulate", "--t-end", "0.1"],
        vec!["verify-orbit", "--samples", "3"],
        vec!["coherent-kernel", "--points", "3"],
        vec!["rep-matrix"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json(&out);
        assert_eq!(v["seed"], 0);
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        assert!(v["config"].is_object());
    }
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["quantize-spectrum", "--help"]).status.code(), Some(0));
}
