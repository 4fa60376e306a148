use std::path::Path;
use std::process::{Command, Output};

fn bqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bqlab")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn diophantine_lists_both_profiles_for_p5() {
    let o = bqlab(&["diophantine", "--p", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["solutions"], serde_json::json!([[3, 1, 0, 1], [2, 0, 1, 2]]));
    assert_eq!(v["agrees_with_closed_form"], true);
}

#[test]
fn growth_writes_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.csv");
    let o = bqlab(&["growth", "--p", "2", "--domain", "torus", "--s", "-1", "--sigma", "0", "--out", &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["N", "data_norm", "ap_norm", "ratio", "slope_running"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    // Slope from the first and last rows, independent of the fitted column.
    let f = |r: &csv::StringRecord, i: usize| r[i].parse::<f64>().unwrap();
    let (a, b) = (&rows[0], &rows[5]);
    let slope = (f(b, 3) / f(a, 3)).ln() / (f(b, 0) / f(a, 0)).ln();
    assert!((slope - 1.0).abs() < 0.15, "{slope}");
    assert!((f(b, 4) - 1.0).abs() < 0.15);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{out}.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "growth");
    assert_eq!(m["input_hashes"]["parameters"].as_str().unwrap().len(), 64);
    assert_eq!(m["outputs"][0], out.as_str());
}

#[test]
fn several_times_write_one_table_each() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.csv");
    let o = bqlab(&["growth", "--p", "2", "--domain", "torus", "--s", "-1", "--t", "0.7,1", "--N-list", "16,32", "--out", &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("g_t0.7.csv").exists());
    assert!(dir.path().join("g_t1.csv").exists());
}

#[test]
fn witness_feeds_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.json");
    let traj = path(dir.path(), "traj.csv");
    let o = bqlab(&["witness", "--domain", "torus", "--p", "2", "--N", "4", "--s", "-1", "--out", &w]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = bqlab(&[
        "simulate", "--p", "2", "--sign", "-", "--K", "16", "--dt", "0.01", "--t-end", "0.1", "--init", &w,
        "--s-values", "-1,0", "--every", "5", "--out", &traj,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(&traj).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["t", "window_s=-1", "window_s=0", "full_s=-1", "full_s=0"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][0], "0");
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{traj}.manifest.json")).unwrap()).unwrap();
    assert!(m["input_hashes"]["init"].is_string());
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = path(dir.path(), name);
        let o = bqlab(&["resonance", "--p", "3", "--domain", "line", "--N-list", "16,32", "--out", &out]);
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn config_file_sits_below_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "run.conf");
    std::fs::write(&cfg, "# shared settings\np = 3\n").unwrap();
    let o = bqlab(&["--config", &cfg, "diophantine"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["p"], 3);
    let o = bqlab(&["diophantine", "--config", &cfg, "--p", "7"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["p"], 7);

    std::fs::write(&cfg, "p = 3\nsigam = 0\n").unwrap();
    let o = bqlab(&["--config", &cfg, "diophantine"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("sigam"));
}

#[test]
fn validation_errors_exit_with_one() {
    let o = bqlab(&["witness", "--domain", "line", "--p", "3", "--N", "16", "--s", "-1", "--sigma", "-2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("try --sigma 0"), "{}", stderr(&o));
    assert_eq!(bqlab(&["growth", "--bogus"]).status.code(), Some(1));
    assert_eq!(bqlab(&["diophantine", "--p", "4"]).status.code(), Some(1));
    assert_eq!(bqlab(&["simulate", "--p", "2", "--K", "8", "--t-end", "1"]).status.code(), Some(1));
}

#[test]
fn budget_errors_exit_with_two() {
    let o = bqlab(&["growth", "--p", "6", "--domain", "line", "--s", "-1", "--N-list", "16", "--samples", "1000000000"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn reproduce_all_runs_a_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "summary.json");
    let o = bqlab(&["reproduce-all", "--only", "4,5", "--out", &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = String::from_utf8_lossy(&o.stdout);
    assert_eq!(table.matches("PASS").count(), 2, "{table}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(bqlab(&["reproduce-all", "--only", "12"]).status.code(), Some(1));
}
