use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_jblab"));
    c.env_remove("JBLAB_TOL");
    c
}

fn write_input(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-inputs");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn real_matrix(name: &str, rows: usize, cols: usize, data: &[f64]) -> PathBuf {
    let rows_json: Vec<Value> = data
        .chunks(cols)
        .map(|r| Value::Array(r.iter().map(|&x| serde_json::json!([x, 0.0])).collect()))
        .collect();
    assert_eq!(rows_json.len(), rows);
    let doc = serde_json::json!({ "shape": [rows, cols], "data": rows_json });
    write_input(name, &doc.to_string())
}

fn run(cmd: &mut Command) -> (Output, Value) {
    let out = cmd.output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, json)
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn analyze_diagonal() {
    let p = real_matrix("diag.json", 2, 2, &[0.5, 0.0, 0.0, 1.0]);
    let (out, r) = run(bin().args(["analyze", "--input"]).arg(&p));
    assert_eq!(code(&out), 0);
    assert_eq!(r["m_q"], 0.5);
    assert_eq!(r["lambda_value"], 0.75);
    assert_eq!(r["dist_to_extremals"]["kind"], "exact");
    assert_eq!(r["dist_to_extremals"]["values"][0], 0.5);
    assert_eq!(r["bp_quasi_invertible"], true);
    assert_eq!(r["gamma_q"], 0.25);
}

#[test]
fn analyze_zero_matrix() {
    let p = real_matrix("zero.json", 2, 3, &[0.0; 6]);
    let (out, r) = run(bin().args(["analyze", "--input"]).arg(&p));
    assert_eq!(code(&out), 0);
    assert_eq!(r["gamma_q"], "inf");
    assert_eq!(r["m_q"], 0.0);
    assert_eq!(r["lambda_value"], 0.5);
}

#[test]
fn analyze_scalar_one() {
    let p = real_matrix("one.json", 1, 1, &[1.0]);
    let (_, r) = run(bin().args(["analyze", "--input"]).arg(&p));
    assert_eq!(r["bp_quasi_invertible"], true);
    assert_eq!(r["lambda_value"], 1.0);
}

#[test]
fn lambda_omitted_outside_unit_ball_and_interval_reported() {
    let p = real_matrix("big.json", 2, 2, &[3.0, 0.0, 0.0, 0.0]);
    let (_, r) = run(bin().args(["analyze", "--input"]).arg(&p));
    assert!(r.get("lambda_value").is_none());
    assert_eq!(r["dist_to_extremals"]["kind"], "interval");
    assert_eq!(r["dist_to_extremals"]["values"], serde_json::json!([2.0, 4.0]));
    assert_eq!(r["dist_to_extremals"]["theorem_tag"], "singular-distance-bounds");
}

#[test]
fn emitted_matrices_round_trip() {
    let p = write_input(
        "complex.json",
        r#"{"shape":[2,3],"data":[[[0.3,-0.1],[0.2,0.7],[-1.1,0.05]],[[0.0,0.4],[0.9,0.0],[0.25,-0.6]]]}"#,
    );
    let (out, r) = run(bin().args(["analyze", "--emit-matrices", "--input"]).arg(&p));
    assert_eq!(code(&out), 0);
    // feed a† back in: its generalized inverse is the original matrix
    let inv = write_input("inverse.json", &r["generalized_inverse"].to_string());
    let (_, back) = run(bin().args(["analyze", "--emit-matrices", "--input"]).arg(&inv));
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let (a, b) = (&original["data"], &back["generalized_inverse"]["data"]);
    for i in 0..2 {
        for j in 0..3 {
            for k in 0..2 {
                let (x, y) = (a[i][j][k].as_f64().unwrap(), b[i][j][k].as_f64().unwrap());
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }
    // r(a) survives a textual round-trip exactly
    let r_path = write_input("range.json", &r["range_tripotent"].to_string());
    let (_, again) = run(bin().args(["analyze", "--emit-matrices", "--input"]).arg(&r_path));
    let reparsed = &again["range_tripotent"]["data"];
    let emitted = &r["range_tripotent"]["data"];
    for i in 0..2 {
        for j in 0..3 {
            for k in 0..2 {
                let (x, y) = (emitted[i][j][k].as_f64().unwrap(), reparsed[i][j][k].as_f64().unwrap());
                assert!((x - y).abs() <= 1e-15, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn decompose_with_lambda() {
    let p = real_matrix("diag-dec.json", 2, 2, &[0.5, 0.0, 0.0, 1.0]);
    let (out, r) = run(bin().args(["decompose", "--lambda", "0.75", "--input"]).arg(&p));
    assert_eq!(code(&out), 0);
    assert_eq!(r["e"]["data"], serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]));
    assert_eq!(r["u"]["data"], serde_json::json!([[[-1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]));
    assert_eq!(r["valid"], true);
}

#[test]
fn decompose_singular_defaults_to_mean() {
    let p = real_matrix("rank-one.json", 2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let (out, r) = run(bin().args(["decompose", "--input"]).arg(&p));
    assert_eq!(code(&out), 0);
    assert_eq!(r["method"], "mean");
    assert_eq!(r["lambda"], 0.5);
}

#[test]
fn decompose_rejects_lambda_above_bound() {
    let p = real_matrix("diag-rej.json", 2, 2, &[0.5, 0.0, 0.0, 1.0]);
    let (out, r) = run(bin().args(["decompose", "--lambda", "0.9", "--input"]).arg(&p));
    assert_eq!(code(&out), 1);
    let msg = r["error"]["message"].as_str().unwrap();
    assert!(msg.contains("(1 + m_q)/2"), "{msg}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("(1 + m_q)/2"));
}

#[test]
fn decompose_rejects_large_norm() {
    let p = real_matrix("norm2.json", 1, 1, &[2.0]);
    let (out, _) = run(bin().args(["decompose", "--input"]).arg(&p));
    assert_eq!(code(&out), 1);
}

#[test]
fn io_and_parse_errors_exit_3() {
    let (out, _) = run(bin().args(["analyze", "--input", "/nonexistent/m.json"]));
    assert_eq!(code(&out), 3);
    let bad = write_input("bad.json", r#"{"shape":[2,2],"data":[[[1,0]]]}"#);
    let (out, _) = run(bin().args(["analyze", "--input"]).arg(&bad));
    assert_eq!(code(&out), 3);
    let junk = write_input("junk.json", "not json");
    let (out, _) = run(bin().args(["analyze", "--input"]).arg(&junk));
    assert_eq!(code(&out), 3);
}

#[test]
fn invalid_flags_exit_1() {
    let p = real_matrix("flags.json", 1, 1, &[0.5]);
    for args in [
        vec!["analyze", "--tol", "-1"],
        vec!["analyze", "--rank-tol", "0"],
        vec!["analyze", "--json", "--text"],
        vec!["analyze", "--bogus"],
    ] {
        let (out, _) = run(bin().args(&args).arg("--input").arg(&p));
        assert_eq!(code(&out), 1, "{args:?}");
    }
    let (out, _) = run(bin().args(["verify", "--trials", "0"]));
    assert_eq!(code(&out), 1);
    let (out, _) = run(bin().arg("--help"));
    assert_eq!(code(&out), 0);
}

#[test]
fn env_tolerance_is_echoed() {
    let p = real_matrix("env.json", 1, 1, &[0.5]);
    let (_, r) = run(bin().env("JBLAB_TOL", "1e-7").args(["analyze", "--input"]).arg(&p));
    assert_eq!(r["settings"]["tol"], 1e-7);
    assert_eq!(r["settings"]["tol_source"], "env");
    assert_eq!(r["settings"]["jblab_tol_env"], "1e-7");
    let (_, r) = run(bin().env("JBLAB_TOL", "1e-7").args(["analyze", "--tol", "1e-8", "--input"]).arg(&p));
    assert_eq!(r["settings"]["tol"], 1e-8);
    assert_eq!(r["settings"]["tol_source"], "flag");
    let (out, _) = run(bin().env("JBLAB_TOL", "abc").args(["analyze", "--input"]).arg(&p));
    assert_eq!(code(&out), 1);
}

#[test]
fn reports_are_byte_identical() {
    let p = write_input("det.json", r#"{"shape":[2,2],"data":[[[0.3,0.1],[0.2,0.0]],[[0.0,-0.4],[0.5,0.5]]]}"#);
    let a = bin().args(["analyze", "--emit-matrices", "--input"]).arg(&p).output().unwrap();
    let b = bin().args(["analyze", "--emit-matrices", "--input"]).arg(&p).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v1 = bin().args(["verify", "--trials", "3", "--seed", "9"]).output().unwrap();
    let v2 = bin().args(["verify", "--trials", "3", "--seed", "9"]).output().unwrap();
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn verify_single_trial_and_forced_failure() {
    let (out, r) = run(bin().args(["verify", "--trials", "1", "--seed", "3"]));
    assert_eq!(code(&out), 0);
    assert_eq!(r["all_passed"], true);
    assert_eq!(r["suites"].as_array().unwrap().len(), 16);

    let (out, r) = run(bin().args(["verify", "--trials", "2", "--tol", "1e-30"]));
    assert_eq!(code(&out), 2);
    assert_eq!(r["all_passed"], false);
    let failed = r["suites"].as_array().unwrap().iter().find(|s| s["ok"] == false).unwrap();
    assert_eq!(failed["first_failure"]["seed"], 0);
    assert!(failed["statement"].as_str().unwrap().len() > 10);
}

#[test]
fn text_output() {
    let p = real_matrix("text.json", 2, 2, &[0.5, 0.0, 0.0, 1.0]);
    let out = bin().args(["analyze", "--text", "--input"]).arg(&p).output().unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("m_q: 0.5"));
    let out = bin().args(["verify", "--trials", "1", "--text"]).output().unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().filter(|l| l.starts_with("PASS")).count() == 16);
}
