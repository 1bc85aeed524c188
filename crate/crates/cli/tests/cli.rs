use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        assert_eq!(self.code, 0, "stderr: {}", self.stderr);
        serde_json::from_str(&self.stdout).expect("stdout is one JSON document")
    }
}

fn run(dir: &Path, args: &[&str]) -> Run {
    run_env(dir, args, &[])
}

fn run_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pseudodet"));
    cmd.current_dir(dir).args(args).env_remove("PSEUDODET_MINOR_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn matrix_text(rows: &[&[f64]]) -> String {
    serde_json::json!({ "n": rows.len(), "real": rows }).to_string()
}

fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "ones2.json", &matrix_text(&[&[1.0, 1.0], &[1.0, 1.0]]));
    write(d, "zero2.json", &matrix_text(&[&[0.0, 0.0], &[0.0, 0.0]]));
    write(d, "zero3.json", &matrix_text(&[&[0.0; 3], &[0.0; 3], &[0.0; 3]]));
    write(d, "constant4.json", &matrix_text(&[&[1.0; 4], &[1.0; 4], &[1.0; 4], &[1.0; 4]]));
    write(d, "lap2_c3.json", &matrix_text(&[&[3.0, -3.0], &[-3.0, 3.0]]));
    write(d, "projdil_1_2.json", &matrix_text(&[&[1.0, 2.0], &[2.0, 4.0]]));
    write(d, "diag_a0.json", &matrix_text(&[&[7.0, 0.0], &[0.0, 0.0]]));
    write(d, "diag10.json", &matrix_text(&[&[1.0, 0.0], &[0.0, 0.0]]));
    write(d, "diag01.json", &matrix_text(&[&[0.0, 0.0], &[0.0, 1.0]]));
    write(d, "diag20.json", &matrix_text(&[&[2.0, 0.0], &[0.0, 0.0]]));
    write(d, "diag30.json", &matrix_text(&[&[3.0, 0.0], &[0.0, 0.0]]));
    write(d, "eye2.json", &matrix_text(&[&[1.0, 0.0], &[0.0, 1.0]]));
    write(d, "half.json", &matrix_text(&[&[0.5, 0.5], &[0.5, 0.5]]));
    write(d, "indef.json", &matrix_text(&[&[1.0, 0.0], &[0.0, -1.0]]));
    write(d, "asym.json", &matrix_text(&[&[1.0, 2.0], &[0.0, 1.0]]));
    write(d, "zero_vec.json", "[0, 0]");
    write(d, "off.json", "[1, -1]");
    write(d, "mu12.json", "[1, 2]");
    write(d, "three.json", "[0, 0, 0]");
    dir
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v["real"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect())
        .collect()
}

fn assert_matrix(v: &Value, expected: &[&[f64]], tol: f64) {
    let m = matrix(v);
    assert_eq!(m.len(), expected.len());
    for (row, e) in m.iter().zip(expected) {
        for (x, y) in row.iter().zip(e.iter()) {
            assert!((x - y).abs() <= tol, "{m:?} vs {expected:?}");
        }
    }
}

fn close(v: &Value, expected: f64, tol: f64) {
    let x = v.as_f64().unwrap();
    assert!((x - expected).abs() <= tol, "{x} vs {expected}");
}

#[test]
fn pdet_examples() {
    let dir = fixtures();
    let d = dir.path();
    let out = run(d, &["pdet", "ones2.json"]).json();
    assert_eq!(out["command"], "pdet");
    close(&out["result"]["value"], 2.0, 1e-12);
    assert_eq!(out["result"]["rank"], 1);
    assert_eq!(out["result"]["method"], "spectral");

    let out = run(d, &["pdet", "zero3.json"]).json();
    assert_eq!(out["result"]["value"].as_f64(), Some(1.0));
    assert_eq!(out["result"]["rank"], 0);

    let out = run(d, &["pdet", "--method", "minor", "ones2.json"]).json();
    close(&out["result"]["value"], 2.0, 1e-12);

    let out = run(d, &["pdet", "--method", "limit", "ones2.json"]).json();
    let estimates = out["result"]["estimates"].as_array().unwrap();
    assert_eq!(estimates.len(), 5);
    close(&out["result"]["value"], 2.0, 1e-4);
}

#[test]
fn pinv_examples() {
    let dir = fixtures();
    let d = dir.path();
    let out = run(d, &["pinv", "ones2.json"]).json();
    assert_matrix(&out["result"]["pinv"], &[&[0.25, 0.25], &[0.25, 0.25]], 1e-12);
    let residuals = out["diagnostics"]["penrose_residuals"].as_array().unwrap();
    assert_eq!(residuals.len(), 4);
    assert!(residuals.iter().all(|r| r.as_f64().unwrap() <= 1e-12));

    let out = run(d, &["pinv", "--method", "berg", "constant4.json"]).json();
    let q = 1.0 / 16.0;
    assert_matrix(&out["result"]["pinv"], &[&[q; 4], &[q; 4], &[q; 4], &[q; 4]], 1e-12);

    let out = run(d, &["pinv", "zero2.json"]).json();
    assert_matrix(&out["result"]["pinv"], &[&[0.0, 0.0], &[0.0, 0.0]], 0.0);
}

#[test]
fn grad_examples() {
    let dir = fixtures();
    let d = dir.path();
    let out = run(d, &["grad", "lap2_c3.json"]).json();
    assert_matrix(&out["result"]["can"], &[&[0.5, -0.5], &[-0.5, 0.5]], 1e-12);
    assert_eq!(out["diagnostics"]["class_equations_passed"], true);

    let out = run(d, &["grad", "projdil_1_2.json"]).json();
    assert_matrix(&out["result"]["can"], &[&[0.2, 0.4], &[0.4, 0.8]], 1e-12);
    close(&out["result"]["det"], 5.0, 1e-12);

    let out = run(d, &["grad", "diag_a0.json"]).json();
    assert_matrix(&out["result"]["can"], &[&[1.0, 0.0], &[0.0, 0.0]], 1e-12);
}

#[test]
fn check_examples() {
    let dir = fixtures();
    let d = dir.path();
    let out = run(d, &["check", "ones2.json", "ones2.json"]).json();
    close(&out["result"]["analytic"], 2.0, 1e-12);
    close(&out["result"]["finite_difference"], 2.0, 1e-8);
    assert_eq!(out["result"]["kernel_match"], true);

    let r = run(d, &["check", "diag10.json", "diag01.json"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert!(r.stderr.contains("kernel"), "{}", r.stderr);

    let out = run(d, &["check", "diag20.json", "diag30.json", "--tau", "1e-6"]).json();
    close(&out["result"]["analytic"], 3.0, 1e-12);
    close(&out["result"]["finite_difference"], 3.0, 1e-8);

    let out = run(d, &["check", "--forward", "diag20.json", "diag30.json"]).json();
    assert_eq!(out["inputs"]["scheme"], "forward");
    close(&out["result"]["finite_difference"], 3.0, 1e-8);
}

#[test]
fn mle_examples() {
    let dir = fixtures();
    let d = dir.path();
    write(d, "pair.csv", "1,1\n-1,-1\n");
    let out = run(d, &["mle", "pair.csv", "--mean-zero"]).json();
    assert_matrix(&out["result"]["sigma_hat"], &[&[1.0, 1.0], &[1.0, 1.0]], 1e-12);
    assert_matrix(&out["result"]["R"], &[&[2.0, 2.0], &[2.0, 2.0]], 1e-12);
    assert_eq!(out["result"]["N"], 2);
    assert_eq!(out["result"]["mode"], "kernel_free");
    assert!(out["result"]["projected_gradient_norm"].as_f64().unwrap() <= 1e-10);

    // P (I/2) P = P/2 for the projector P = ones/2
    write(d, "basis.csv", "1,0\n0,1\n");
    let out = run(d, &["mle", "basis.csv", "--mean-zero", "--projector", "half.json"]).json();
    assert_matrix(&out["result"]["sigma_hat"], &[&[0.25, 0.25], &[0.25, 0.25]], 1e-12);
    assert_eq!(out["result"]["mode"], "fixed_range");

    let out = run(d, &["mle", "pair.csv", "--mean", "zero_vec.json"]).json();
    assert_matrix(&out["result"]["sigma_hat"], &[&[1.0, 1.0], &[1.0, 1.0]], 1e-12);
    let out = run(d, &["mle", "pair.csv", "--mean-sample"]).json();
    assert_eq!(out["inputs"]["mean"], "sample");

    write(d, "empty.csv", "");
    assert_eq!(run(d, &["mle", "empty.csv", "--mean-zero"]).code, 1);
    write(d, "ragged.csv", "1,2\n3\n");
    assert_eq!(run(d, &["mle", "ragged.csv", "--mean-zero"]).code, 1);
    write(d, "text.csv", "1,x\n");
    assert_eq!(run(d, &["mle", "text.csv", "--mean-zero"]).code, 1);
    assert_eq!(run(d, &["mle", "pair.csv", "--mean-zero", "--projector", "diag20.json"]).code, 2);
    assert_eq!(run(d, &["mle", "pair.csv", "--mean", "three.json"]).code, 1);
}

#[test]
fn density_examples() {
    let dir = fixtures();
    let d = dir.path();
    let out = run(d, &["density", "--x", "zero_vec.json", "--mean", "zero_vec.json", "--cov", "ones2.json"]).json();
    close(&out["result"]["density"], (4.0 * std::f64::consts::PI).powf(-0.5), 1e-12);
    assert_eq!(out["result"]["on_support"], true);
    assert_eq!(out["result"]["rank"], 1);

    let out = run(d, &["density", "--x", "off.json", "--mean", "zero_vec.json", "--cov", "ones2.json"]).json();
    assert_eq!(out["result"]["density"].as_f64(), Some(0.0));
    assert_eq!(out["result"]["on_support"], false);
    assert!(out["result"]["log_density"].is_null());

    let out = run(d, &["density", "--x", "zero_vec.json", "--mean", "zero_vec.json", "--cov", "eye2.json"]).json();
    close(&out["result"]["density"], 1.0 / (2.0 * std::f64::consts::PI), 1e-12);

    let r = run(d, &["density", "--x", "three.json", "--mean", "zero_vec.json", "--cov", "ones2.json"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.is_empty());
}

#[test]
fn sample_examples() {
    let dir = fixtures();
    let d = dir.path();
    let r = run(d, &["sample", "--cov", "zero2.json", "--mean", "mu12.json", "--count", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "1,2\n1,2\n1,2\n");
    let env: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(env["command"], "sample");

    let args = ["sample", "--cov", "ones2.json", "--mean", "zero_vec.json", "--count", "5", "--seed", "42"];
    let first = run(d, &args);
    let second = run(d, &args);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout.lines().count(), 5);
    let other = run(d, &["sample", "--cov", "ones2.json", "--mean", "zero_vec.json", "--count", "5", "--seed", "43"]);
    assert_ne!(first.stdout, other.stdout);

    let r = run(d, &["sample", "--cov", "ones2.json", "--mean", "zero_vec.json", "--count", "10000", "--out", "big.csv"]);
    let env = r.json();
    assert_eq!(env["result"]["count"], 10000);
    let text = std::fs::read_to_string(d.join("big.csv")).unwrap();
    assert_eq!(text.lines().count(), 10000);
    for line in text.lines() {
        let xs: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((xs[0] - xs[1]).abs() <= 1e-9, "{line}");
    }

    assert_eq!(run(d, &["sample", "--cov", "indef.json", "--mean", "zero_vec.json", "--count", "3"]).code, 2);
}

#[test]
fn input_errors_exit_one() {
    let dir = fixtures();
    let d = dir.path();
    assert_eq!(run(d, &["pdet", "missing.json"]).code, 1);
    write(d, "garbage.json", "{not json");
    assert_eq!(run(d, &["pdet", "garbage.json"]).code, 1);
    write(d, "shape.json", r#"{"n": 2, "real": [[1, 2, 3], [4, 5, 6]]}"#);
    assert_eq!(run(d, &["pdet", "shape.json"]).code, 1);
    assert_eq!(run(d, &["pdet", "--method", "bogus", "ones2.json"]).code, 1);
    assert_eq!(run(d, &["frobnicate"]).code, 1);
    assert_eq!(run(d, &["check", "ones2.json", "zero3.json"]).code, 1);
}

#[test]
fn symmetrize_flag_selects_policy() {
    let dir = fixtures();
    let d = dir.path();
    let r = run(d, &["pdet", "asym.json"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("Hermitian"), "{}", r.stderr);
    let out = run(d, &["--symmetrize", "pdet", "asym.json"]).json();
    // [[1,1],[1,1]] after symmetrization
    close(&out["result"]["value"], 2.0, 1e-12);
    assert_eq!(out["inputs"]["symmetrize"], true);
}

#[test]
fn complex_input_round_trips() {
    let dir = fixtures();
    let d = dir.path();
    write(d, "herm.json", r#"{"n": 2, "real": [[2, 0], [0, 2]], "imag": [[0, 1], [-1, 0]]}"#);
    let out = run(d, &["pinv", "herm.json"]).json();
    // eigenvalues 1 and 3, both kept
    let inv = &out["result"]["pinv"];
    close(&inv["real"][0][0], 2.0 / 3.0, 1e-12);
    close(&inv["imag"][0][1], -1.0 / 3.0, 1e-12);
    let out = run(d, &["pdet", "herm.json"]).json();
    close(&out["result"]["value"], 3.0, 1e-12);
}

#[test]
fn rel_tol_changes_rank_decision() {
    let dir = fixtures();
    let d = dir.path();
    write(d, "tiny.json", &matrix_text(&[&[1.0, 0.0], &[0.0, 1e-9]]));
    assert_eq!(run(d, &["pdet", "tiny.json"]).json()["result"]["rank"], 2);
    let out = run(d, &["--rel-tol", "1e-6", "pdet", "tiny.json"]).json();
    assert_eq!(out["result"]["rank"], 1);
    close(&out["result"]["value"], 1.0, 1e-12);
    assert_eq!(out["inputs"]["rel_tol"].as_f64(), Some(1e-6));
}

#[test]
fn minor_cap_from_environment() {
    let dir = fixtures();
    let d = dir.path();
    let r = run_env(d, &["pdet", "--method", "minor", "constant4.json"], &[("PSEUDODET_MINOR_CAP", "3")]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    let out = run_env(d, &["pdet", "--method", "minor", "constant4.json"], &[("PSEUDODET_MINOR_CAP", "4")]).json();
    close(&out["result"]["value"], 4.0, 1e-12);
}

#[test]
fn json_indent_pretty_prints() {
    let dir = fixtures();
    let d = dir.path();
    let r = run(d, &["--json-indent", "2", "pdet", "ones2.json"]);
    assert!(r.stdout.contains("\n  \"command\": \"pdet\""), "{}", r.stdout);
    let compact = run(d, &["pdet", "ones2.json"]);
    assert_eq!(compact.stdout.trim_end().lines().count(), 1);
}
