use timeflow::args::Command;
use timeflow::{execute, run, CliError};

#[test]
fn execute_returns_artifact_and_summary() {
    let artifact = execute(&Command::PhaseDefect { dim: 8, extended: false }).unwrap();
    assert!(artifact.body.contains("\"defect_rank\": 1"));
    assert!(artifact.summary.starts_with("phase-defect:"));
    assert!(artifact.curve.is_none());
}

#[test]
fn numerical_errors_map_to_two() {
    let err = execute(&Command::FockCheck { dim: 1, omega: 1.0 }).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    let err = CliError::Core(timeflow_core::Error::Truncation { required_dim: 40 });
    assert_eq!(err.exit_code(), 2);
    assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
}

#[test]
fn run_writes_requested_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let code = run(["timeflow", "bell-sweep", "--profiles", "100", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["n_profiles"], 100);
}
