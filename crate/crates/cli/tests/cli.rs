//! End-to-end runs of the binary.

use serde_json::Value;
use std::process::{Command, Output};
use toeplitz_trace_cli::JobSpec;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toeplitz-trace"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn index_of_the_shift() {
    let v = json(&["index", "--symbol", "z"]);
    assert_eq!(v["result"]["index"], -1);
    assert_eq!(v["agreement"], true);
}

#[test]
fn witten_index_of_one_plus_z() {
    let v = json(&["witten", "--symbol", "1+z"]);
    let routes = v["result"]["routes"].as_array().unwrap();
    assert!(!routes.is_empty());
    for r in routes {
        let value = r["value"].as_f64().unwrap();
        assert!((value + 0.5).abs() < 2e-2, "{r}");
    }
}

#[test]
fn heat_trace_matches_closed_form() {
    let v = json(&["heat", "--symbol", "z", "--s", "2"]);
    let expected = 1.0 - (-2.0f64).exp();
    for r in v["result"]["routes"].as_array().unwrap() {
        assert!((r["value"].as_f64().unwrap() - expected).abs() < 1e-10, "{r}");
    }
}

#[test]
fn gamma_example_passes() {
    let out = run(&["reproduce", "gamma", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS") && !text.contains("FAIL"), "{text}");
}

#[test]
fn helton_howe_example_passes() {
    let v = json(&["reproduce", "helton_howe_monomials", "--m", "2", "--n", "3", "--h", "coeffs{-1:2}"]);
    assert_eq!(v["agreement"], true);
    for c in v["result"]["comparisons"].as_array().unwrap() {
        assert!((c["reference"].as_f64().unwrap() - 4.0).abs() < 1e-12, "{c}");
    }
}

#[test]
fn ssf_csv_has_one_row_per_point() {
    let out = run(&["ssf", "--symbol", "1+z", "--grid", "8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 9);
}

#[test]
fn input_errors_exit_with_one() {
    for args in [
        &["witten", "--symbol", "z^2*(1+z"][..],
        &["reproduce", "no_such_example"],
        &["trace", "--symbol", "z", "--phi", "power:-1"],
        &["index"],
        &["witten", "--symbol", "1+z", "--no-such-flag"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let out = binary()
        .args(["index", "--symbol", "z"])
        .env("TOEPLITZ_TRACE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = binary()
        .args(["index", "--symbol", "z"])
        .env("TOEPLITZ_TRACE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn disagreement_exits_with_two() {
    let out = run(&["krein-check", "--symbol", "1+z", "--phi", "poly:0,0,1", "--size", "32", "--tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(
        &path,
        r#"{"command": {"name": "heat", "s": 1.0}, "symbol": "z", "format": "json"}"#,
    )
    .unwrap();
    let path = path.to_str().unwrap();
    let v: Value = serde_json::from_str(&stdout(&run(&["--config", path]))).unwrap();
    assert_eq!(v["job"]["command"]["s"], 1.0);
    let v: Value = serde_json::from_str(&stdout(&run(&["--config", path, "--symbol", "z^2"]))).unwrap();
    assert_eq!(v["job"]["symbol"], "z^2");
    let expected = 2.0 * (1.0 - (-1.0f64).exp());
    assert!((v["result"]["routes"][0]["value"].as_f64().unwrap() - expected).abs() < 1e-10);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(&path, r#"{"command": {"name": "index"}, "symbol": "z", "colour": "red"}"#).unwrap();
    let out = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_output_is_deterministic_and_replayable() {
    let args = ["witten", "--symbol", "(z+1)*(z-0.5)/(z-2)", "--format", "json"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    let job: JobSpec = serde_json::from_value(v["job"].clone()).unwrap();
    let replay = serde_json::to_string(&job).unwrap();
    let again: JobSpec = JobSpec::from_json(&replay).unwrap();
    assert_eq!(job, again);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(&path, &replay).unwrap();
    let replayed = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(replayed.stdout, first.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("index.csv");
    let out = run(&["index", "--symbol", "z^2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().count() >= 2, "{text}");
}

#[test]
fn dump_matrix_encodings() {
    let out = run(&["dump-matrix", "--symbol", "1+z", "--size", "4", "--matrix", "a"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 4);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.bin");
    let out = run(&[
        "dump-matrix", "--symbol", "1+z", "--size", "4", "--matrix", "b", "--encoding", "binary", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), 16 + 4 * 4 * 16);

    let out = run(&["dump-matrix", "--symbol", "1+z", "--size", "4", "--encoding", "binary"]);
    assert_eq!(out.status.code(), Some(1));
}
