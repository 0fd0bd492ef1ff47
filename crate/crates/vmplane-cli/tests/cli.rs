use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn vmplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vmplane")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn write_spec(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn flat_turn_angle() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "flat.json", r#"{"kind": "constant", "params": {"k": 0.0}}"#);
    let out = vmplane(&["turn-angle", "--profile", &spec, "--rmax", "50", "--r", "2", "--kappa", "1.5707963267948966"]);
    let v = stdout_json(&out);
    assert!((num(&v["turn_angle"]["value"]) - FRAC_PI_2).abs() < 1e-8, "{v}");
    assert_eq!(v["turn_angle"]["status"], "converged");
    assert_eq!(v["ray"], true);
}

#[test]
fn hyperbolic_classify_is_a_pole() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "hyp.json", r#"{"kind": "constant", "params": {"k": -1.0}}"#);
    let v = stdout_json(&vmplane(&["classify", "--profile", &spec, "--rmax", "15", "--r", "1"]));
    assert_eq!(v["critical"], true);
    assert_eq!(v["pole"]["pole"], true);
    assert!((num(&v["turn_angle"]["value"]) - (1.0 / 1f64.sinh()).atan()).abs() < 1e-6, "{v}");
}

#[test]
fn build_writes_csv_that_loads_back() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "k0.json", r#"{"kind": "ku_family", "params": {"u": 0.0}}"#);
    let csv = dir.path().join("k0.csv");
    let csv = csv.to_str().unwrap();
    let v = stdout_json(&vmplane(&["plane", "build", "--spec", &spec, "--rmax", "20", "--out", csv]));
    assert_eq!(v["diagnostics"]["von_mangoldt"], true);
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.lines().next().unwrap().starts_with("r,m,mp"));
    let v = stdout_json(&vmplane(&["plane", "check", "--profile", csv]));
    assert_eq!(v["von_mangoldt"], true);
    assert_eq!(v["nonnegative_curvature"], true);
}

#[test]
fn cone_radii() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("cone.json");
    let spec = spec.to_str().unwrap();
    let v = stdout_json(&vmplane(&["cone", "--slope", "0.3", "--spec-out", spec]));
    assert!((num(&v["achieved_slope"]) - 0.3).abs() < 1e-8);
    let rmax = format!("{}", num(&v["r_max"]));
    let v = stdout_json(&vmplane(&["radii", "--profile", spec, "--rmax", &rmax]));
    assert_eq!(v["R_m"]["kind"], "finite");
    let r_m = num(&v["R_m"]["estimate"]);
    assert!((r_m - 11.244).abs() < 1e-3, "{v}");
    assert!((num(&v["rho_m"]["estimate"]) - 27.946).abs() < 1e-3, "{v}");
    assert!(num(&v["R_p"]["estimate"]) <= r_m, "{v}");
}

#[test]
fn sphere_exits_with_star_violation() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "sphere.json", r#"{"kind": "constant", "params": {"k": 1.0}}"#);
    let out = vmplane(&["plane", "build", "--spec", &spec, "--rmax", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let e = stderr_json(&out);
    assert_eq!(e["error"], "star_violation");
    assert!((num(&e["first_zero"]) - std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn malformed_spec_exits_2() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "bad.json", r#"{"kind": "constant", "params": {"k": "#);
    let out = vmplane(&["plane", "build", "--spec", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_input");
}

#[test]
fn radius_outside_window_exits_4() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "flat.json", r#"{"kind": "constant", "params": {"k": 0.0}}"#);
    let out = vmplane(&["turn-angle", "--profile", &spec, "--rmax", "10", "--r", "20", "--kappa", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"], "domain");
}

#[test]
fn svg_outputs() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(dir.path(), "k0.json", r#"{"kind": "ku_family", "params": {"u": 0.0}}"#);
    let trace = dir.path().join("trace.svg");
    let v = stdout_json(&vmplane(&[
        "trace",
        "--profile",
        &spec,
        "--rmax",
        "30",
        "--r",
        "2",
        "--kappa",
        "1.2",
        "--smax",
        "10",
        "--svg",
        trace.to_str().unwrap(),
    ]));
    assert!(num(&v["speed_drift"]) < 1e-8);
    let svg = fs::read_to_string(&trace).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<polyline").count(), 1);

    let scan = dir.path().join("scan.svg");
    let v = stdout_json(&vmplane(&[
        "scan",
        "--profile",
        &spec,
        "--rmax",
        "30",
        "--grid",
        "16",
        "--svg",
        scan.to_str().unwrap(),
    ]));
    assert_eq!(v["samples"].as_array().unwrap().len(), 16);
    assert_eq!(fs::read_to_string(&scan).unwrap().matches("<polyline").count(), 2);

    let embed = dir.path().join("embed.svg");
    let v = stdout_json(&vmplane(&[
        "embed",
        "--profile",
        &spec,
        "--rmax",
        "30",
        "--samples",
        "50",
        "--svg",
        embed.to_str().unwrap(),
    ]));
    assert_eq!(v["kind"], "curve");
    assert_eq!(fs::read_to_string(&embed).unwrap().matches("<polyline").count(), 1);
}
