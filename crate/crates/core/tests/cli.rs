use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use logpreserve::json::{parse_matrix, to_json};
use logpreserve::linalg::Matrix;
use logpreserve::maps::MatrixSpaceMap;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logpreserve")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn matrix_file(dir: &TempDir, name: &str, m: &Matrix) -> String {
    write(dir, name, &to_json(m))
}

fn read_matrix(path: &Path) -> Matrix {
    parse_matrix(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_reports_membership_and_exit_code() {
    let dir = TempDir::new().unwrap();
    let minus_i = matrix_file(&dir, "a.json", &Matrix::scalar(2, -1.0));
    let out = run(&["check", "--in", &minus_i, "--set", "Kstar"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["in_set"], Value::Bool(true));

    let out = run(&["check", "--in", &minus_i, "--set", "K"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["in_set"], Value::Bool(false));

    let swap = matrix_file(&dir, "b.json", &Matrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]]));
    let out = run(&["check", "--in", &swap]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["set"], "Kstar");
    assert!(v["witness"]["reason"].as_str().unwrap().contains("odd"));
}

#[test]
fn logm_and_expm_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let a = Matrix::from_rows(&[[2.0, 1.0], [0.5, 3.0]]);
    let input = matrix_file(&dir, "a.json", &a);
    let log_path = dir.path().join("log.json");
    let exp_path = dir.path().join("exp.json");
    let out = run(&["logm", "--in", &input, "--out", log_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["kind"], "Principal");
    let out = run(&["expm", "--in", log_path.to_str().unwrap(), "--out", exp_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(read_matrix(&exp_path).distance(&a) <= 1e-12 * a.frobenius());
}

#[test]
fn paired_logarithm_mode() {
    let dir = TempDir::new().unwrap();
    let input = matrix_file(&dir, "a.json", &Matrix::scalar(2, -2.0));
    let out = run(&["logm", "--in", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no principal logarithm"));
    let out = run(&["logm", "--in", &input, "--mode", "paired"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["roundtrip_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn analyze_map_and_falsify() {
    let dir = TempDir::new().unwrap();
    let q = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
    let swap = MatrixSpaceMap::from_two_sided(&Matrix::identity(2), &q, false).unwrap();
    let swap_path = write(&dir, "swap.json", &to_json(&swap));
    let out = run(&["analyze-map", "--in", &swap_path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "NotPreserver");

    let out = run(&["falsify", "--in", &swap_path, "--budget", "10", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["found"], Value::Bool(true));

    let t = write(&dir, "t.json", &to_json(&MatrixSpaceMap::transpose_map(3)));
    let out = run(&["analyze-map", "--in", &t]);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "StandardPreserver");
    assert_eq!(v["form"]["transposed"], Value::Bool(true));
}

#[test]
fn gadgets_density_and_theorem() {
    let out = run(&["gadgets", "--theta", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["det_B"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["embedded_in_Kstar"], Value::Bool(true));
    assert!(v["embedded_times_rotation"].as_array().unwrap().iter().all(|p| p["in_Kstar"] == Value::Bool(false)));

    let out = run(&["density", "--n", "2", "--degree", "2", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["monomials"], 15);
    assert_eq!(v["witness"], Value::Bool(true));

    let out = run(&["verify-theorem", "--n", "2", "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["all_passed"], Value::Bool(true));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["check", "--in", "/nonexistent/matrix.json"]).status.code(), Some(2));
    let bad = write(&dir, "bad.json", "{\"n\": 2, \"entries\": [1, 2, 3]}");
    assert_eq!(run(&["check", "--in", &bad]).status.code(), Some(2));
    let nan = write(&dir, "nan.json", "{\"n\": 1, \"entries\": [null]}");
    assert_eq!(run(&["expm", "--in", &nan]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--n", "0", "--degree", "1"]).status.code(), Some(2));
}
