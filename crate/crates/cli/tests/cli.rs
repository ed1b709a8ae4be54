use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn timeflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timeflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = timeflow(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn check_golden(args: &[&str], name: &str) -> String {
    let out = timeflow(args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, golden(name), "{name} changed");
    text
}

#[test]
fn polarizer_curve_golden() {
    let text = check_golden(&["polarizer-curve", "--alphas", "5", "--normalize"], "polarizer_curve_belinfante.csv");
    assert_eq!(text.lines().next(), Some("alpha,m,malus,residual"));
    for row in rows(&text) {
        let alpha: f64 = row[0].parse().unwrap();
        let m: f64 = row[1].parse().unwrap();
        assert!((m - (2.0 + (2.0 * alpha).cos()) / 3.0).abs() < 1e-12);
    }
}

#[test]
fn dilation_trace_golden() {
    let text = check_golden(&["dilation-trace", "--window", "5", "--steps", "5"], "dilation_trace.csv");
    assert_eq!(text.lines().next(), Some("t,r,h,q,p,label"));
    let labels: Vec<String> = rows(&text).into_iter().map(|r| r[5].clone()).collect();
    assert_eq!(labels, ["in", "in", "interaction", "out", "out", "out"]);
    for row in rows(&text) {
        let t: f64 = row[0].parse().unwrap();
        let r: f64 = row[1].parse().unwrap();
        assert!((r - (-40.0 + 4.25 * t)).abs() < 1e-6);
    }
}

#[test]
fn phase_evolve_golden() {
    let base = ["phase-evolve", "--half-dim", "16", "--alpha-re", "1", "--t-max", "3", "--steps", "3"];
    let plus = check_golden(&base, "phase_evolve_plus.csv");
    let mut minus_args = base.to_vec();
    minus_args.extend(["--subspace", "minus"]);
    let minus = check_golden(&minus_args, "phase_evolve_minus.csv");
    assert_eq!(plus.lines().next(), Some("t,phase,subspace"));
    for (p, m) in rows(&plus).iter().zip(rows(&minus)) {
        let t: f64 = p[0].parse().unwrap();
        let phi_p: f64 = p[1].parse().unwrap();
        let phi_m: f64 = m[1].parse().unwrap();
        assert!((phi_p - t).abs() < 1e-12);
        assert!((phi_m - (std::f64::consts::TAU - t).rem_euclid(std::f64::consts::TAU)).abs() < 1e-12);
        assert_eq!(p[2], "plus");
        assert_eq!(m[2], "minus");
    }
}

#[test]
fn phase_defect_report() {
    let v = stdout_json(&["phase-defect", "--dim", "64"]);
    assert_eq!(v["operator"], "one-sided");
    assert_eq!(v["defect_rank"], 1);
    assert_eq!(v["defect_support"], serde_json::json!([0]));
    let ext = stdout_json(&["phase-defect", "--dim", "64", "--extended"]);
    assert_eq!(ext["basis_dim"], 128);
    assert_eq!(ext["defect_rank"], 0);
    assert!(ext["defect_norm"].as_f64().unwrap() < 1e-14);
}

#[test]
fn fock_check_report() {
    let v = stdout_json(&["fock-check", "--dim", "8", "--omega", "2"]);
    assert!((v["commutator_edge_entry"].as_f64().unwrap() + 8.0).abs() < 1e-12);
    assert!(v["commutator_off_edge_max"].as_f64().unwrap() < 1e-12);
    assert!(v["h_a_residual_max"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["ground_energy"], 1.0);
}

#[test]
fn bell_chsh_reports() {
    let qm = stdout_json(&["bell-chsh", "--model", "qm"]);
    assert!((qm["s"].as_f64().unwrap() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-9);
    assert_eq!(qm["correlations"].as_array().unwrap().len(), 4);
    assert_eq!(qm["seed"], Value::Null);
    let hv = stdout_json(&["bell-chsh", "--model", "belinfante"]);
    assert!((hv["s"].as_f64().unwrap() - std::f64::consts::SQRT_2).abs() < 1e-9);
    let mc = stdout_json(&["bell-chsh", "--model", "belinfante", "--events", "20000", "--seed", "3"]);
    assert_eq!(mc["method"], "monte-carlo");
    assert_eq!(mc["seed"], 3);
    let s = mc["s"].as_f64().unwrap();
    let err = mc["s_std_error"].as_f64().unwrap();
    assert!((s - std::f64::consts::SQRT_2).abs() < 4.0 * err);
}

#[test]
fn bell_sweep_report() {
    let v = stdout_json(&["bell-sweep", "--profiles", "200", "--modes", "6", "--seed", "1"]);
    assert_eq!(v["within_bound"], true);
    assert!(v["max_abs_s"].as_f64().unwrap() <= 2.0 + 1e-8);
    assert_eq!(v["n_step_profiles"], 50);
}

#[test]
fn polarizer_fit_writes_both_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("fit.json");
    let csv_path = dir.path().join("curve.csv");
    let out = timeflow(&[
        "polarizer-fit",
        "--epsilon",
        "0.02",
        "--modes",
        "6",
        "--output",
        json_path.to_str().unwrap(),
        "--curve-output",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("polarizer-fit:"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert!(v["rms_residual"].as_f64().unwrap() <= 0.0865192785);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 6);
    let history: Vec<f64> = v["objective_history"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(history.windows(2).all(|w| w[1] <= w[0]));
    let curve = fs::read_to_string(&csv_path).unwrap();
    assert_eq!(curve.lines().next(), Some("alpha,m,malus,residual"));
    assert_eq!(curve.lines().count(), 182);
    let mut names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["curve.csv", "fit.json"]);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["bell-chsh", "--model", "belinfante", "--events", "5000", "--seed", "11"];
    assert_eq!(timeflow(&args).stdout, timeflow(&args).stdout);
    let args = ["dilation-trace", "--window", "5", "--steps", "7"];
    assert_eq!(timeflow(&args).stdout, timeflow(&args).stdout);
}

#[test]
fn exit_codes() {
    // unknown subcommand and bad values are validation errors
    assert_eq!(timeflow(&["bogus"]).status.code(), Some(1));
    assert_eq!(timeflow(&["polarizer-fit", "--epsilon", "1.5"]).status.code(), Some(1));
    assert_eq!(timeflow(&["dilation-trace"]).status.code(), Some(1));
    assert_eq!(timeflow(&["bell-chsh", "--model", "qm", "--events", "5000"]).status.code(), Some(1));
    assert_eq!(timeflow(&["bell-sweep", "--profiles", "10"]).status.code(), Some(1));
    assert_eq!(timeflow(&["phase-defect", "-d", "4"]).status.code(), Some(1));
    // numerical contracts
    assert_eq!(timeflow(&["dilation-trace", "--window", "5", "--half-width", "30"]).status.code(), Some(2));
    assert_eq!(timeflow(&["phase-evolve", "--half-dim", "8", "--alpha-re", "3"]).status.code(), Some(2));
    assert_eq!(timeflow(&["dilation-trace", "--window", "5", "--p0", "200"]).status.code(), Some(2));
    assert_eq!(timeflow(&["--help"]).status.code(), Some(0));
}

#[test]
fn error_message_goes_to_stderr() {
    let out = timeflow(&["dilation-trace", "--window", "5", "--half-width", "30"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("boundary"));
}
