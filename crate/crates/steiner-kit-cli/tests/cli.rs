//! End-to-end runs of the binary: exit codes, golden output, and
//! determinism.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steiner-kit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_oriental(dir: &Path, n: &str) -> std::path::PathBuf {
    let path = dir.join(format!("d{n}.json"));
    let out = bin().args(["oriental", n, "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    path
}

#[test]
fn oriental_two_matches_the_golden_file() {
    let out = run(&["oriental", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read("tests/golden/oriental2.json").unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn oriental_out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d2.json");
    let out = bin().args(["oriental", "2", "--out"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let golden = std::fs::read("tests/golden/oriental2.json").unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), golden);
}

#[test]
fn oriental_four_has_thirty_one_elements() {
    let out = run(&["oriental", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["basis"].as_array().unwrap().len(), 31);
    assert_eq!(v["e"].as_object().unwrap().len(), 5);
}

#[test]
fn oriental_rejects_out_of_range_dimensions() {
    for bad in ["-1", "12", "nonsense"] {
        let out = run(&["oriental", bad]);
        assert_eq!(out.status.code(), Some(2), "oriental {bad}");
    }
}

#[test]
fn decompose_renders_the_golden_string() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_oriental(dir.path(), "4");
    let out = bin()
        .arg("decompose")
        .arg(&path)
        .args([r#"{"0234":1,"0124":1}"#, "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(
        v["rendered"],
        "((234 *_0 12 *_0 01) *_1 0124) *_2 ((34 *_0 23 *_0 012) *_1 0234)"
    );
    assert_eq!(v["dim"], 3);
    assert_eq!(v["tree"]["k"], 2);
}

#[test]
fn decompose_singleton_is_a_generator_leaf() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_oriental(dir.path(), "4");
    let out = bin()
        .arg("decompose")
        .arg(&path)
        .args([r#"{"0123":1}"#, "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rendered"], "0123");
    assert_eq!(v["tree"], serde_json::json!({"gen": "0123"}));
}

#[test]
fn decompose_rejects_non_coherent_chains() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_oriental(dir.path(), "4");
    let out = bin()
        .arg("decompose")
        .arg(&path)
        .args([r#"{"0":1,"1":1}"#, "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not coherent"), "stderr: {err}");
}

#[test]
fn check_certifies_the_five_simplex() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_oriental(dir.path(), "5");
    let out = bin().arg("check").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["basis_size"], 63);
}

#[test]
fn check_rejects_a_broken_boundary_of_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{"basis":[{"id":"v","dim":0},{"id":"w","dim":0},{"id":"g","dim":1},{"id":"h","dim":2}],
            "d":{"g":{"w":1,"v":-1},"h":{"g":1}},"e":{"v":1,"w":1}}"#,
    )
    .unwrap();
    let out = bin().arg("check").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("boundary"), "stderr: {err}");
}

#[test]
fn check_reports_a_loop_witness_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("looped.json");
    std::fs::write(
        &path,
        r#"{"basis":[{"id":"u","dim":0},{"id":"v","dim":0},{"id":"a","dim":1},{"id":"b","dim":1}],
            "d":{"a":{"v":1,"u":-1},"b":{"u":1,"v":-1}},"e":{"u":1,"v":1}}"#,
    )
    .unwrap();
    let out = bin().arg("check").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["ok"], false);
    assert_eq!(v["loop_free"]["witness"]["level"], 0);
    assert!(!v["loop_free"]["witness"]["cycle"].as_array().unwrap().is_empty());
}

#[test]
fn check_rejects_a_missing_file() {
    let out = run(&["check", "/nonexistent/nowhere.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_is_byte_deterministic() {
    let first = run(&["verify", "--max-n", "4"]);
    assert_eq!(first.status.code(), Some(0));
    let second = run(&["verify", "--max-n", "4"]);
    assert_eq!(first.stdout, second.stdout);
    let v = stdout_json(&first);
    assert_eq!(v["ok"], true);
    assert_eq!(v["seed"], 42);
    let third = run(&["verify", "--max-n", "4", "--seed", "7"]);
    assert_eq!(third.status.code(), Some(0), "other seeds still pass");
}

#[test]
fn verify_single_suites_run() {
    for suite in ["faces", "coherence", "horns", "complicial"] {
        let out = run(&["verify", "--suite", suite, "--max-n", "3"]);
        assert_eq!(out.status.code(), Some(0), "suite {suite}");
        let v = stdout_json(&out);
        assert_eq!(v["suites"].as_array().unwrap().len(), 1);
        assert_eq!(v["suites"][0]["suite"], suite);
    }
}

#[test]
fn verify_rejects_oversized_max_n() {
    let out = run(&["verify", "--max-n", "12"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn log_env_var_adds_stderr_diagnostics() {
    let quiet = run(&["oriental", "3"]);
    assert!(quiet.stderr.is_empty());
    let loud = bin()
        .args(["oriental", "3"])
        .env("STEINER_KIT_LOG", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&loud.stderr).contains("[steiner-kit]"));
    assert_eq!(quiet.stdout, loud.stdout, "logging never changes the payload");
}
