use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn cilab(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cilab"));
    for k in
        ["CILAB_SEED", "CILAB_SAMPLES", "CILAB_INPUT", "CILAB_OUTPUT", "CILAB_FORMAT", "CILAB_SEQUENTIAL", "CILAB_TOL"]
    {
        cmd.env_remove(k);
    }
    cmd.args(args).envs(envs.iter().copied()).output().expect("run cilab")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn value<'a>(r: &'a Value, label: &str) -> &'a Value {
    r["values"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["label"] == label)
        .map(|e| &e["value"])
        .unwrap_or_else(|| panic!("no value `{label}`"))
}

fn input(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn stiefel_default_is_sd_and_indefinite() {
    let out = cilab(&["stiefel", "--samples", "200"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(value(&r, "SDCI"), "PASS");
    assert_eq!(value(&r, "F_indefinite"), "TRUE");
}

#[test]
fn classify_w1_is_sd() {
    let f = input(r#"{"algebra": "su2", "components": {"w1": [1, 0, 0]}}"#);
    let out = cilab(&["classify", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value(&json(&out), "class"), "SD");
}

#[test]
fn classify_complex_basis_omega_direction() {
    // z1^zb1 + z2^zb2 + z3^zb3 is proportional to ω.
    let f = input(
        r#"{"algebra": "so3", "basis": "complex",
            "components": {"z1^zb1": [[0,1],0,0], "z2^zb2": [[0,1],0,0], "z3^zb3": [[0,1],0,0]}}"#,
    );
    let out = cilab(&["classify", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(value(&json(&out), "class"), "LAMBDA_MINUS_2");
}

#[test]
fn decompose_omega_is_all_part_1() {
    let f = input(r#"{"basis": "real", "components": {"12": 1, "34": 1, "56": 1}}"#);
    let out = cilab(&["decompose", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!((value(&r, "part_1/fraction").as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(value(&r, "class"), "IN_1");
}

#[test]
fn malformed_input_exits_2_with_field_path() {
    let f = input("{\"algebra\": \"su2\",\n \"components\": {\"w1\": [1, \"x\", 0]}}");
    let out = cilab(&["classify", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("components.w1[1]"), "{err}");
    assert!(err.contains(":2:"), "{err}");
}

#[test]
fn wrong_coefficient_count_and_unknown_label() {
    let f = input(r#"{"algebra": "su2", "components": {"w1": [1, 0]}}"#);
    let out = cilab(&["classify", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 3 coefficients"));

    let f = input(r#"{"algebra": "su2", "components": {"w9": [1, 0, 0]}}"#);
    let out = cilab(&["classify", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("components.w9"));
}

#[test]
fn missing_input_and_bad_flags_exit_2() {
    assert_eq!(cilab(&["classify"], &[]).status.code(), Some(2));
    assert_eq!(cilab(&["selftest", "--samples", "0"], &[]).status.code(), Some(2));
    assert_eq!(cilab(&["selftest", "--tol", "-1"], &[]).status.code(), Some(2));
    assert_eq!(cilab(&["stiefel", "--input", "/nonexistent/x.json"], &[]).status.code(), Some(2));
}

#[test]
fn non_sd_spectrum_is_input_error() {
    let f = input(r#"{"algebra": "su2", "components": {"v1": [1, 0, 0]}}"#);
    let out = cilab(&["spectrum", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_with_einstein_ricci() {
    let f = input(r#"{"algebra": "so3", "components": {"w2": [0, 1, 0]}, "ricci": [[8,0,0],[0,8,0],[0,0,8]]}"#);
    let out = cilab(&["spectrum", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let rop = r["sections"].as_array().unwrap().iter().find(|s| s["title"] == "R_OP").unwrap();
    assert!((value(rop, "min").as_f64().unwrap() - 16.0).abs() < 1e-12);
}

#[test]
fn csv_format() {
    let out = cilab(&["stiefel", "--samples", "50", "--format", "csv"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("label,value\n"));
    assert!(text.contains("stiefel/SDCI,PASS"));
}

#[test]
fn env_overrides_flags_defaults() {
    let a = cilab(&["stiefel"], &[("CILAB_SEED", "7"), ("CILAB_SAMPLES", "40"), ("CILAB_FORMAT", "csv")]);
    let b = cilab(&["stiefel", "--seed", "7", "--samples", "40", "--format", "csv"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // An explicit flag beats the environment.
    let c = cilab(&["stiefel", "--seed", "7", "--samples", "40"], &[("CILAB_FORMAT", "csv"), ("CILAB_SEED", "99")]);
    assert_eq!(c.stdout, b.stdout);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = cilab(&["calibrate", "--output", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["verdict"], "PASS");
}

#[test]
fn stiefel_non_einstein_y() {
    let f = input(r#"{"y": [0.5, 0.25, 0.25]}"#);
    let out = cilab(&["stiefel", "--samples", "50", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(value(&json(&out), "einstein"), false);
}

#[test]
fn symbols_with_given_covectors() {
    let f = input(r#"{"dims": [1], "covectors": [[0.3,-1.2,0.5,0.8,-0.1,0.7,1.1], [1,0,0,0,0,0,0]]}"#);
    let out = cilab(&["symbols", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let sec = |t: &str| r["sections"].as_array().unwrap().iter().find(|s| s["title"] == t).unwrap().clone();
    let generic = sec("full_d1_xi0");
    assert_eq!(value(&generic, "exact"), true);
    assert_eq!(value(&generic, "ranks"), &serde_json::json!([1.0, 6.0, 7.0]));
    // A purely horizontal covector drops rank in the full sequence.
    assert_eq!(value(&sec("full_d1_xi1"), "exact"), false);
}

#[test]
fn symbols_zero_covector_is_input_error() {
    let f = input(r#"{"covectors": [[0,0,0,0,0,0,0]]}"#);
    let out = cilab(&["symbols", "--input", f.path().to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("covectors[0]"));
}

#[test]
fn vanishing_and_stability_defaults() {
    let f = input(r#"{"algebra": "su2", "components": {"w1": [0.1, 0, 0]}}"#);
    let p = f.path().to_str().unwrap();
    let v = cilab(&["vanishing", "--input", p], &[]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["verdict"], "VANISHES");
    let s = cilab(&["stability", "--input", p], &[]);
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(json(&s)["verdict"], "STABLE_SUFFICIENT");
}
