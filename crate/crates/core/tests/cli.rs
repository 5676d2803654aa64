use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn xmems(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xmems"))
        .args(args)
        .env_remove("XMEMS_DENSE_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn write_state(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

fn measure_json(path: &str) -> (i32, Value) {
    let o = xmems(&["measure", "--input", path]);
    let v = serde_json::from_str(stdout(&o).trim()).unwrap_or(Value::Null);
    (code(&o), v)
}

#[test]
fn measure_ghz_three_qubits() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(
        dir.path(),
        "ghz.json",
        r#"{"n_qubits":3,"a":[0.5,0,0,0],"b":[0.5,0,0,0],"z":[[0.5,0],[0,0],[0,0],[0,0]]}"#,
    );
    let (c, v) = measure_json(&p);
    assert_eq!(c, 0);
    assert_eq!(v["entropy"].as_f64(), Some(0.0));
    assert_eq!(v["concurrence"].as_f64(), Some(1.0));
    assert_eq!(v["argmax_index"].as_u64(), Some(1));
    assert_eq!(v["valid"].as_bool(), Some(true));
}

#[test]
fn measure_maximally_mixed() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(
        dir.path(),
        "mixed.json",
        r#"{"n_qubits":2,"a":[0.25,0.25],"b":[0.25,0.25],"z":[[0,0],[0,0]]}"#,
    );
    let (c, v) = measure_json(&p);
    assert_eq!(c, 0);
    assert!((v["entropy"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(v["concurrence"].as_f64(), Some(0.0));
    assert_eq!(v["argmax_index"].as_u64(), Some(0));
}

#[test]
fn measure_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(
        dir.path(),
        "example.json",
        r#"{"n_qubits":2,"a":[0.3,0.2],"b":[0.1,0.4],"z":[[0.15,0],[0.1,0]]}"#,
    );
    let (c, v) = measure_json(&p);
    assert_eq!(c, 0);
    assert!((v["entropy"].as_f64().unwrap() - 0.635 * 4.0 / 3.0).abs() < 1e-13);
    assert_eq!(v["concurrence"].as_f64(), Some(0.0));
}

#[test]
fn measure_invalid_state_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(
        dir.path(),
        "bad.json",
        r#"{"n_qubits":2,"a":[0.5,0],"b":[0.5,0],"z":[[0.6,0],[0,0]]}"#,
    );
    let (c, v) = measure_json(&p);
    assert_eq!(c, 3);
    assert_eq!(v["valid"].as_bool(), Some(false));
    assert_eq!(v["violations"][0]["condition"].as_str(), Some("coherence"));
}

#[test]
fn measure_malformed_json_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_state(
        dir.path(),
        "short.json",
        r#"{"n_qubits":2,"a":[0.5],"b":[0.5,0],"z":[[0,0],[0,0]]}"#,
    );
    assert_eq!(code(&xmems(&["measure", "--input", &p])), 1);
    let p = write_state(dir.path(), "broken.json", "{\"n_qubits\": 2,\n  \"a\": [");
    let o = xmems(&["measure", "--input", &p]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn missing_input_is_io_error() {
    assert_eq!(
        code(&xmems(&["measure", "--input", "/nonexistent/state.json"])),
        2
    );
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(code(&xmems(&["sweep", "--n", "3"])), 1);
    assert_eq!(code(&xmems(&["sweep", "--n", "1", "--count", "10"])), 1);
    assert_eq!(code(&xmems(&["boundary", "--n", "2", "--grid", "1"])), 1);
    assert_eq!(code(&xmems(&["mems", "--n", "2", "--gamma", "0.7"])), 1);
    assert_eq!(code(&xmems(&["frobnicate"])), 1);
    assert_eq!(code(&xmems(&["--help"])), 0);
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = xmems(&[
        "sweep",
        "--n",
        "3",
        "--count",
        "500",
        "--seed",
        "7",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,entropy,concurrence"));
    assert_eq!(lines.count(), 500);
    let summary: Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(summary["count"].as_u64(), Some(500));
    assert_eq!(summary["boundary_violations"].as_u64(), Some(0));
}

#[test]
fn sweep_is_reproducible_across_shards() {
    let a = xmems(&[
        "sweep", "--n", "4", "--count", "3000", "--seed", "11", "--shards", "1",
    ]);
    let b = xmems(&[
        "sweep", "--n", "4", "--count", "3000", "--seed", "11", "--shards", "8",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = xmems(&["sweep", "--n", "4", "--count", "3000", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn unwritable_output_exits_2() {
    let o = xmems(&[
        "sweep",
        "--n",
        "2",
        "--count",
        "5",
        "--output",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(code(&o), 2);
    let o = xmems(&["scr", "--output", "/nonexistent/dir/scr.csv"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn boundary_curve_endpoints() {
    let o = xmems(&["boundary", "--n", "3", "--grid", "11"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (c, s) = l.split_once(',').unwrap();
            (c.parse().unwrap(), s.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0].0, 0.0);
    assert!((rows[0].1 - 32.0 / 35.0).abs() < 1e-15);
    assert_eq!(rows[10], (1.0, 0.0));
    assert!(rows.windows(2).all(|w| w[1].1 < w[0].1));

    let o = xmems(&["boundary", "--n", "2", "--grid", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn mems_prints_point_and_state() {
    let o = xmems(&["mems", "--n", "2", "--gamma", "0.3333333333333333"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let text = v.to_string();
    assert!(text.contains("0.59259259259"), "{text}");
}

#[test]
fn scr_table_is_exact() {
    let o = xmems(&["scr", "--max-n", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n_qubits,fraction,decimal");
    assert!(rows[1].starts_with("2,8/9,"));
    assert!(rows[2].starts_with("3,32/35,"));
    assert!(rows[3].starts_with("4,128/135,"));
    assert_eq!(code(&xmems(&["scr", "--max-n", "31"])), 1);
}

#[test]
fn verify_passes_and_repeats() {
    let a = xmems(&["verify", "--n", "2", "--count", "200", "--seed", "3"]);
    let b = xmems(&["verify", "--n", "2", "--count", "200", "--seed", "3"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    for line in stdout(&a).lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["passed"].as_bool(), Some(true), "{line}");
    }
}

#[test]
fn verify_rejects_dense_overflow() {
    let o = xmems(&["verify", "--n", "13", "--count", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("dense cap"));
}
