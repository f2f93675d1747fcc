use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tolreg::format::{parse_system, serialize_system};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn tolreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tolreg")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = tolreg(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn sys(name: &str) -> String {
    data(name).display().to_string()
}

const FILES: [&str; 5] = ["system11.json", "system12.json", "system13.json", "example1.json", "interval_1d.json"];

#[test]
fn shipped_files_round_trip() {
    for f in FILES {
        let text = std::fs::read_to_string(data(f)).unwrap();
        let parsed = parse_system(&text).unwrap();
        let again = parse_system(&serialize_system(&parsed)).unwrap();
        assert_eq!(parsed, again, "{f}");
        assert_eq!(serialize_system(&parsed), serialize_system(&again));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(tolreg(&["bogus"]).status.code(), Some(2));
    assert_eq!(tolreg(&["tol-max"]).status.code(), Some(2));
    assert_eq!(tolreg(&["--help"]).status.code(), Some(0));
    assert_eq!(tolreg(&["tol-max", "--system", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(tolreg(&["polygon", "--system", &sys("system12.json")]).status.code(), Some(1));
    assert_eq!(tolreg(&["tol-eval", "--system", &sys("system12.json"), "--x", "1,2"]).status.code(), Some(2));
    assert_eq!(tolreg(&["tol-grid", "--system", &sys("system13.json")]).status.code(), Some(2));
    assert_eq!(tolreg(&["regularize", "--system", &sys("system12.json")]).status.code(), Some(1));
}

#[test]
fn parse_errors_report_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"A": [[1, [2, 1]]], "b": [0]}"#).unwrap();
    let out = tolreg(&["tol-max", "--system", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("improper interval at (1,2)"));
}

#[test]
fn config_file_is_applied_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "restarts = 2\nseed = 5\n").unwrap();
    let v = json(&["tol-max", "--system", &sys("system12.json"), "--config", good.to_str().unwrap()]);
    assert_eq!(v["run_values"].as_array().unwrap().len(), 3);
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    let out = tolreg(&["tol-max", "--system", &sys("system12.json"), "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    let s = sys("system13.json");
    for args in [
        vec!["tol-max", "--system", s.as_str(), "--seed", "7"],
        vec!["strips", "--system", s.as_str()],
        vec!["tol-grid", "--system", s.as_str(), "--grid", "-1,1,-1,1,0.5"],
    ] {
        let a = tolreg(&args);
        let b = tolreg(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn tol_grid_is_bounded_by_max() {
    let out = tolreg(&["tol-grid", "--system", &sys("system13.json"), "--grid", "-1,1,-1,1,0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,x2,tol"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r[2] <= -1.0 + 1e-6));
}

#[test]
fn tol_max_reports_plateau_value() {
    let v = json(&["tol-max", "--system", &sys("system13.json")]);
    assert!((v["value"].as_f64().unwrap() + 1.0).abs() < 1e-4);
    assert!((v["lp_value"].as_f64().unwrap() + 1.0).abs() < 1e-4);
    assert_eq!(v["certificate"], "empty");
}

#[test]
fn formal_solve_one_dimensional() {
    let v = json(&["formal-solve", "--system", &sys("interval_1d.json")]);
    assert_eq!(v["x_star"], serde_json::json!([[3.0, 2.0]]));
    assert_eq!(v["pseudo_solution"], serde_json::json!([2.5]));
    assert_eq!(v["t_star"], serde_json::json!(0.5));
    assert_eq!(v["widened_rhs"], serde_json::json!([[2.0, 5.0]]));
    assert_eq!(v["inner_estimate"], "not_proper");
}

#[test]
fn member_and_strips() {
    let v = json(&["member", "--system", &sys("system11.json"), "--x", "4,4"]);
    assert_eq!(v["class"], "interior");
    let v = json(&["member", "--system", &sys("system11.json"), "--x", "0,0"]);
    assert_eq!(v["class"], "outside");
    let v = json(&["strips", "--system", &sys("system11.json")]);
    assert_eq!(v["count"], 4);
    let v = json(&["polygon", "--system", &sys("system11.json")]);
    assert!(v["count"].as_u64().unwrap() >= 3);
    assert_eq!(v["truncated"], false);
}

#[test]
fn rohn_export_formats() {
    let v = json(&["rohn-export", "--system", &sys("interval_1d.json")]);
    assert_eq!(v["coefficients"], serde_json::json!([[2.0, -1.0], [-1.0, 2.0]]));
    assert_eq!(v["rhs"], serde_json::json!([4.0, -3.0]));
    let out = tolreg(&["rohn-export", "--system", &sys("interval_1d.json"), "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "c1,c2,rhs\n2,-1,4\n-1,2,-3\n");
    let v = json(&["rohn-check", "--system", &sys("interval_1d.json")]);
    assert_eq!(v["feasible"], false);
}

#[test]
fn regularization_commands() {
    let e1 = sys("example1.json");
    let v = json(&["regularize", "--system", &e1, "--theta", "0"]);
    let x: Vec<f64> = v["pseudo_solution"].as_array().unwrap().iter().map(|c| c.as_f64().unwrap()).collect();
    // exact solution of [[99,100],[98,99]] x = (1,1) is (-1, 1)
    assert!((x[0] + 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6, "{x:?}");
    let v = json(&["regularize", "--system", &e1, "--theta", "1", "--widen", "0.5"]);
    assert_eq!(v["widen"], serde_json::json!(0.5));
    let v = json(&["sweep", "--system", &e1, "--thetas", "0,0.5,1"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let out = tolreg(&["sweep", "--system", &e1, "--thetas", "0,1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("theta,certificate,max_tol,distance,min_corner_cond,x1,x2\n"));
    assert_eq!(text.lines().count(), 3);
    let v = json(&["cond", "--system", &e1, "--theta", "1"]);
    assert!(v["cond_shifted"].as_f64().unwrap() < v["cond"].as_f64().unwrap());
    let v = json(&["corners", "--system", &e1, "--theta", "1"]);
    assert_eq!(v["count"], 16);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mid.json");
    std::fs::write(&path, r#"{"A": [[1.5]], "b": [[3, 4]]}"#).unwrap();
    let v = json(&["regularize", "--system", path.to_str().unwrap(), "--method", "formal", "--theta", "0.5"]);
    assert_eq!(v["pseudo_solution"], serde_json::json!([2.5]));
}
