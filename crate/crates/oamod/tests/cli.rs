//! End-to-end checks of the `oamod` binary and the documented JSON schemas:
//! golden config/report pair, exit-code discipline, determinism, and the
//! stdout/stderr split.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use oamod::runner::{run, RunConfig};

fn docs_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs")
        .join(name)
}

fn run_binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oamod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("oamod-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("scratch file");
    path
}

fn normalized(mut value: Value) -> Value {
    value["wall_clock_seconds"] = Value::from(0.0);
    value
}

#[test]
fn golden_config_reproduces_golden_report() {
    let config_text = std::fs::read_to_string(docs_path("config.example.json")).unwrap();
    let config = RunConfig::from_json(&config_text).unwrap();
    let report = run(&config).unwrap();

    let got: Value = serde_json::from_str(&report.to_json()).unwrap();
    let golden_text = std::fs::read_to_string(docs_path("report.example.json")).unwrap();
    let golden: Value = serde_json::from_str(&golden_text).unwrap();
    assert_eq!(
        normalized(got),
        normalized(golden),
        "report drifted from docs/report.example.json; regenerate it with the CLI if the change is intended"
    );
}

#[test]
fn binary_writes_report_to_stdout_and_logs_to_stderr() {
    let out = run_binary(&[
        "--config",
        docs_path("config.example.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).expect("stdout is the JSON report");
    assert_eq!(report["verdict"], "ok");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("verdict"), "progress goes to stderr");

    // Quiet mode silences stderr entirely.
    let quiet = run_binary(&[
        "--config",
        docs_path("config.example.json").to_str().unwrap(),
        "--quiet",
    ]);
    assert!(quiet.status.success());
    assert!(quiet.stderr.is_empty());
}

#[test]
fn binary_is_deterministic_modulo_wall_clock() {
    let config = docs_path("config.example.json");
    let args = ["--config", config.to_str().unwrap(), "--quiet"];
    let a = run_binary(&args);
    let b = run_binary(&args);
    let va: Value = serde_json::from_slice(&a.stdout).unwrap();
    let vb: Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(normalized(va), normalized(vb));
}

#[test]
fn seed_flag_overrides_config() {
    let out = run_binary(&[
        "--config",
        docs_path("config.example.json").to_str().unwrap(),
        "--seed",
        "7",
        "--quiet",
    ]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 7);
}

#[test]
fn negative_dimension_exits_two_without_output() {
    let path = scratch_file(
        "bad-dim.json",
        r#"{
            "module": {"kind": "rectangular", "rows": -3, "cols": 3, "flavor": "compact_operator"},
            "map": {"kind": "pure_quadratic", "codomain_dim": 1},
            "seed": 1,
            "samples": 10
        }"#,
    );
    let out = run_binary(&["--config", path.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "no report on config errors");
    let _ = std::fs::remove_file(path);
}

#[test]
fn mismatched_map_kind_exits_two() {
    let path = scratch_file(
        "bad-map.json",
        r#"{
            "module": {"kind": "rectangular", "rows": 3, "cols": 3, "flavor": "compact_operator"},
            "map": {"kind": "odd_cube"},
            "seed": 1,
            "samples": 10
        }"#,
    );
    let out = run_binary(&["--config", path.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(path);
}

#[test]
fn expected_counterexample_failures_exit_zero() {
    let path = scratch_file(
        "odd-cube.json",
        r#"{
            "module": {"kind": "diagonal_module", "dim": 4, "flavor": "compact_operator"},
            "map": {"kind": "odd_cube"},
            "seed": 11,
            "samples": 40
        }"#,
    );
    let out = run_binary(&["--config", path.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "ok_expected_failures");
    assert!(report["expected_failures"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v == "t_real_homogeneity"));
    assert!(report["unexpected_failures"].as_array().unwrap().is_empty());
    let _ = std::fs::remove_file(path);
}

#[test]
fn perturbed_run_flags_the_residual_as_expected() {
    let path = scratch_file(
        "perturbed.json",
        r#"{
            "module": {"kind": "rectangular", "rows": 3, "cols": 3, "flavor": "compact_operator"},
            "map": {"kind": "perturbed", "base": {"kind": "additive_plus_quadratic", "codomain_dim": 2}, "epsilon": 0.1},
            "seed": 3,
            "samples": 60
        }"#,
    );
    let out = run_binary(&["--config", path.to_str().unwrap(), "--quiet"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "ok_expected_failures");
    let expected = report["expected_failures"].as_array().unwrap();
    assert!(expected.iter().any(|v| v == "residual_threshold"));
    assert!(expected.iter().any(|v| v == "orthogonal_additivity"));
    assert!(report["decomposition"]["residual"]["max"].as_f64().unwrap() > 0.01);
    let _ = std::fs::remove_file(path);
}

#[test]
fn report_to_file_honors_out_flag() {
    let out_path = std::env::temp_dir().join(format!("oamod-out-{}.json", std::process::id()));
    let out = run_binary(&[
        "--config",
        docs_path("config.example.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--quiet",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "report goes to the file, not stdout");
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    let _ = std::fs::remove_file(out_path);
}
