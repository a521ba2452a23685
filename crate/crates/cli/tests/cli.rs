use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use toprec::spec::{parse_curve_spec, serialize_curve, CurveSpec};
use toprec_core::curve::builtin_cubic;
use toprec_core::Exact;

fn toprec(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toprec")).args(args).arg("--out").arg(out).env_remove("TOPREC_OUT_DIR").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn compute_lists_the_requested_forms() {
    let dir = tempfile::tempdir().unwrap();
    let o = toprec(dir.path(), &["compute", "--curve", "airy", "--chi-max", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("omega.json"));
    let mut gn: Vec<(u64, u64)> = v["forms"].as_array().unwrap().iter().map(|f| (f["g"].as_u64().unwrap(), f["n"].as_u64().unwrap())).collect();
    gn.sort();
    assert_eq!(gn, [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)]);
    assert!(v["meta"]["config_hash"].as_str().unwrap().len() == 64);
    assert!(v["meta"]["curve_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn airy_free_energies_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let o = toprec(dir.path(), &["compute", "--curve", "airy", "--g-max", "5"]);
    assert_eq!(code(&o), 0);
    let v = json(&dir.path().join("fg.json"));
    let values: Vec<&str> = v["free_energies"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["0/1"; 4]);
}

#[test]
fn bad_spec_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    fs::write(&spec, "{\n  \"R\": \"1/2\",\n  \"points\": [\n    { \"id\": \"a\", \"x\": \"0\", \"y\": [\"0\", \"1/0\"] }\n  ]\n}\n").unwrap();
    let o = toprec(dir.path(), &["compute", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4, column"), "{err}");

    fs::write(&spec, "{\n  \"R\": \"1/2\",\n  \"points\": [,]\n}\n").unwrap();
    let o = toprec(dir.path(), &["compute", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn spec_file_drives_compute() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("airy.json");
    fs::write(&spec, r#"{ "name": "airy-spec", "R": "1/2", "points": [{ "id": "a", "x": "0", "y": ["0", "1"] }] }"#).unwrap();
    let o = toprec(dir.path(), &["compute", "--spec", spec.to_str().unwrap(), "--chi-max", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("omega.json"));
    assert_eq!(v["meta"]["curve"], "airy-spec");
    assert_eq!(v["forms"][0]["coefficients"][0], serde_json::json!(["a:-2;a:-2;a:-2", "-1/2"]));
}

#[test]
fn verify_accepts_builtins_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    for curve in ["airy", "cubic"] {
        let o = toprec(dir.path(), &["verify", "--curve", curve, "--chi-max", "4", "--samples", "20"]);
        assert_eq!(code(&o), 0, "{curve}: {}", String::from_utf8_lossy(&o.stdout));
        let v = json(&dir.path().join("bounds.json"));
        assert!(v["violations"].as_array().unwrap().is_empty());
    }
    let o = toprec(dir.path(), &["verify", "--curve", "airy", "--chi-max", "3", "--debug-cgn-override", "1,2,1/1000000"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("(g, n) = (1, 2)"));
}

#[test]
fn analyze_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = toprec(dir.path(), &["analyze", "--curve", "airy", "--g-max", "5"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate (all-zero) F_g sequence"));

    // (2g)!·3⁻ᵍ
    let mut csv = String::from("# synthetic\ng,value\n");
    let mut fact = 1.0f64;
    for g in 1..=12u32 {
        fact *= f64::from(2 * g - 1) * f64::from(2 * g);
        csv.push_str(&format!("{g},{:e}\n", fact / 3f64.powi(g as i32)));
    }
    let input = dir.path().join("seq.csv");
    fs::write(&input, csv).unwrap();
    let o = toprec(dir.path(), &["analyze", "--input", input.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("analysis.json"));
    assert_eq!(v["fit"]["beta"], 2.0);
    assert!((v["fit"]["r_est"].as_f64().unwrap() - 3.0).abs() < 1e-6);

    let o = toprec(dir.path(), &["analyze", "--input", input.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("fit.csv")).unwrap();
    assert!(text.lines().any(|l| l == "beta,residual,selected"));
    assert!(text.contains("# config_hash: "));
}

#[test]
fn cubic_analysis_has_finite_radius() {
    let dir = tempfile::tempdir().unwrap();
    let o = toprec(dir.path(), &["analyze", "--curve", "cubic", "--g-max", "6", "--mode", "float:64"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("analysis.json"));
    assert!(v["fit"]["beta"].as_f64().unwrap() <= 5.0);
    assert!(v["borel"]["radius_est"].as_f64().unwrap().is_finite());
}

#[test]
fn exact_json_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["compute", "--curve", "cubic", "--chi-max", "3", "--g-max", "2"];
    assert_eq!(code(&toprec(a.path(), &args)), 0);
    assert_eq!(code(&toprec(b.path(), &args)), 0);
    for f in ["omega.json", "fg.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn recheck_and_invalid_configs() {
    let dir = tempfile::tempdir().unwrap();
    let o = toprec(dir.path(), &["compute", "--curve", "cubic", "--chi-max", "2", "--recheck"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&toprec(dir.path(), &["compute", "--curve", "nope"])), 2);
    assert_eq!(code(&toprec(dir.path(), &["compute", "--curve", "airy", "--chi-max", "0"])), 2);
    assert_eq!(code(&toprec(dir.path(), &["compute", "--curve", "airy", "--mode", "float:0"])), 2);
}

#[test]
fn truncated_spec_exits_with_truncation_code() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("short.json");
    fs::write(&spec, r#"{ "R": "1/2", "points": [{ "id": "a", "x": "0", "y": ["0", "1"], "trunc": 2 }] }"#).unwrap();
    let o = toprec(dir.path(), &["compute", "--spec", spec.to_str().unwrap(), "--chi-max", "3"]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn spec_round_trip() {
    let curve = builtin_cubic::<Exact>(&(), 10);
    let text = serialize_curve(&curve);
    let back = parse_curve_spec::<Exact>(&(), &text).unwrap();
    assert_eq!(serialize_curve(&back), text);
    assert_eq!(CurveSpec::from_json(&text).unwrap(), CurveSpec::from_curve(&back));
}
