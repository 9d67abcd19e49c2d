//! End-to-end checks of the qwalk binary: schemas, exit codes, determinism.

use std::process::{Command, Output};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("spawn qwalk")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn spectrum_csv_shape() {
    let out = qwalk(&["spectrum", "--n", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#schema=qwalk.spectrum.v1"));
    assert_eq!(lines.next(), Some("n,operator,re,im,residual,on_arc"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 32);
    assert_eq!(rows.iter().filter(|r| r.contains(",U,")).count(), 16);
    assert_eq!(rows.iter().filter(|r| r.contains(",Uprime,")).count(), 16);
    let arc: Vec<&str> = rows
        .iter()
        .filter(|r| r.contains(",Uprime,") && r.ends_with("true"))
        .cloned()
        .collect();
    assert_eq!(arc.len(), 2, "arc rows: {arc:?}");
    // the unperturbed walk has exactly one arc eigenvalue: 1 itself
    let u_arc: Vec<&str> = rows
        .iter()
        .filter(|r| r.contains(",U,") && r.ends_with("true"))
        .cloned()
        .collect();
    assert_eq!(u_arc.len(), 1, "U arc rows: {u_arc:?}");
    assert!(u_arc[0].starts_with("8,U,1.00") || u_arc[0].starts_with("8,U,1,"));
}

#[test]
fn spectrum_json_parses() {
    let out = qwalk(&["spectrum", "--n", "6", "--format", "json"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 24);
    assert_eq!(rows[0]["n"], 6);
}

#[test]
fn search_json_and_determinism() {
    let args = ["search", "--n", "8", "--seed", "11", "--trials", "5000"];
    let a = qwalk(&args);
    let b = qwalk(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["n"], 8);
    assert_eq!(v["t_f"], 18);
    let p = v["p_exact"].as_f64().unwrap();
    assert!((0.375..=0.5).contains(&p), "p_exact {p}");
    let p_hat = v["p_empirical"].as_f64().unwrap();
    assert!((p - p_hat).abs() < 0.05);
}

#[test]
fn search_t_f_convention_flag() {
    let derived = qwalk(&["search", "--n", "8"]);
    let stated = qwalk(&["search", "--n", "8", "--t-f-convention", "stated"]);
    let vd: serde_json::Value = serde_json::from_str(&stdout(&derived)).unwrap();
    let vs: serde_json::Value = serde_json::from_str(&stdout(&stated)).unwrap();
    assert_eq!(vd["t_f"], 18); // round(pi/2 * sqrt(128))
    assert_eq!(vs["t_f"], 25); // round(pi/2 * sqrt(256))
}

#[test]
fn curve_row_count_and_schema() {
    let out = qwalk(&["curve", "--n", "8", "--t-max", "54"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "#schema=qwalk.curve.v1");
    assert_eq!(lines[1], "t,p_target");
    assert_eq!(lines.len(), 2 + 55); // t = 0..=54
    assert!(lines[2].starts_with("0,0.00390625")); // uniform start: 1/2^n
}

#[test]
fn verify_ok_range() {
    let out = qwalk(&["verify", "--n-range", "4..8"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["all_pass"], true);
}

#[test]
fn verify_rejects_odd_bounds() {
    let out = qwalk(&["verify", "--n-range", "5..7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_csv() {
    let out = qwalk(&["compare", "--n-range", "4..10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "#schema=qwalk.compare.v1");
    assert_eq!(lines[1], "n,t_f_walk,p_walk,iters_grover,p_grover");
    assert_eq!(lines.len(), 2 + 7);
}

#[test]
fn evolve_zero_steps_is_uniform() {
    let out = qwalk(&["evolve", "--n", "4", "--steps", "0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let amps = v["amps"].as_array().unwrap();
    assert_eq!(amps.len(), 4 * 16);
    let expected = 1.0 / 8.0; // 1/sqrt(n 2^n)
    for a in amps {
        assert_eq!(a[0].as_f64().unwrap(), expected);
        assert_eq!(a[1].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn capacity_cap_gives_usage_exit() {
    let out = qwalk(&["search", "--n", "40", "--backend", "full"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("QWALK_MAX_N"));
}

#[test]
fn env_var_raises_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["search", "--n", "12", "--backend", "full"])
        .env("QWALK_MAX_N", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["search", "--n", "12", "--backend", "full"])
        .env("QWALK_MAX_N", "12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn missing_required_flag_is_usage_error() {
    let out = qwalk(&["spectrum"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_preloads_flags_and_cli_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"n": 8, "seed": 5, "trials": 1000}"#).unwrap();
    let out = qwalk(&["search", "--config", cfg.to_str().unwrap(), "--seed", "9"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 8);
    assert_eq!(v["trials"], 1000);
    assert_eq!(v["seed"], 9);
}

#[test]
fn unknown_config_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"nn": 8}"#).unwrap();
    let out = qwalk(&["search", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.csv");
    let to_file = qwalk(&["spectrum", "--n", "6", "--output", path.to_str().unwrap()]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let direct = qwalk(&["spectrum", "--n", "6"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}
