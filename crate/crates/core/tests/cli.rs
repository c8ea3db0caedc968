//! End-to-end checks of the command-line surface: subcommand dispatch,
//! output schemas, exit codes and byte-level determinism.

use std::process::{Command, Output};

fn pfres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = pfres(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn smx_sweep_reproduces_the_golden_row() {
    let text = stdout_of(&["smx", "sweep", "--m", "16"]);
    assert!(text.starts_with("M,n,T_n,savings,ancillae"));
    assert!(text.lines().any(|l| l == "16,2,96,96,8"), "{text}");
}

#[test]
fn lcu_verify_reports_zero_deviation_for_e2() {
    let text = stdout_of(&["lcu", "verify", "--op", "e2", "--lambda", "2"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["deviation"], 0.0);
    assert_eq!(v["ok"], true);
}

#[test]
fn cost_ratio_lambda_sweep_starts_at_one() {
    let text = stdout_of(&[
        "cost", "ratio", "--sweep", "lambda", "--from", "2", "--to", "1e6", "--points", "7",
        "--models", "dc1,dc2,qub",
    ]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,ratio_dc1,ratio_dc2,ratio_qub");
    let first = lines.next().unwrap();
    assert_eq!(first, "2,1,1,1");
}

#[test]
fn ratio_sweep_is_byte_deterministic() {
    let args = [
        "cost", "ratio", "--sweep", "n", "--from", "1e2", "--to", "1e12", "--points", "17",
    ];
    assert_eq!(stdout_of(&args), stdout_of(&args));
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = pfres(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_params_exit_3_with_machine_readable_error() {
    let out = pfres(&["lcu", "verify", "--op", "e2", "--lambda", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["kind"], "invalid_params");
}

#[test]
fn guard_trip_exits_4() {
    let out = pfres(&["stateprep", "sim", "--np", "9", "--m", "4"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn stateprep_sim_schema() {
    let text = stdout_of(&["stateprep", "sim", "--np", "4", "--m", "4096"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["failure_prob"].as_f64().unwrap() > 0.0);
    assert!(v["max_ratio_error"].as_f64().is_some());
    assert_eq!(v["per_box_mass"].as_array().unwrap().len(), 3);
}

#[test]
fn trotter_budget_reads_params_file() {
    let dir = std::env::temp_dir().join("pfres-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("params.json");
    std::fs::write(
        &path,
        r#"{"eta":2,"N":8,"L":2.0,"Lambda":2,"a":1,"K":1,"Z":[2.0],"t":1.0,"eps":0.001}"#,
    )
    .unwrap();
    let text = stdout_of(&["trotter", "budget", "--params", path.to_str().unwrap(), "--p1", "2"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(v["total_gates"].as_f64().unwrap() > 0.0);
    assert!(v["chosen"]["r1"].as_u64().unwrap() >= 1);
}

#[test]
fn check_modes_pass() {
    for sub in ["lcu", "ops", "smx", "cutoff", "stateprep", "trotter"] {
        let out = pfres(&[sub, "check"]);
        assert!(out.status.success(), "{sub} check failed");
    }
}

#[test]
fn comm_exact_golden_value() {
    let text = stdout_of(&["comm", "exact", "--pair", "e2u", "--lambda", "8"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!((v["exact"].as_f64().unwrap() - 15.0).abs() < 1e-9);
}

#[test]
fn output_file_flag_writes_the_artifact() {
    let dir = std::env::temp_dir().join("pfres-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let _ = stdout_of(&[
        "smx", "sweep", "--m", "256", "--out", path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("M,n,T_n,savings,ancillae"));
}
