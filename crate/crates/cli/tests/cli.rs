use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn supercheq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supercheq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_config(dir: &TempDir, name: &str, json: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

/// Data rows of a CSV report, skipping `#` lines and the column header.
fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn default_ee_scan_has_one_row_per_family_depth_trial_plus_haar() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("scan.csv");
    let o = supercheq(&["ee-scan", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = read(&out);
    assert!(text.starts_with("# supercheq ee-scan config={"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2 * 10 * 5 + 5);
    assert_eq!(rows.iter().filter(|r| r[0] == "haar").count(), 5);
}

#[test]
fn ee_scan_is_reproducible_and_independent_of_jobs() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "cfg.json",
        r#"{"n_qubits": 4, "depths": [1, 3], "files": 32, "trials": 2}"#,
    );
    let a = supercheq(&["ee-scan", "--config", &cfg, "--jobs", "1"]);
    let b = supercheq(&["ee-scan", "--config", &cfg, "--jobs", "3"]);
    let c = supercheq(&["ee-scan", "--config", &cfg]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(data_rows(&stdout(&a)).len(), 2 * 2 * 2 + 2);
    let other = supercheq(&["ee-scan", "--config", &cfg, "--nonce", "abcd"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn zero_depth_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", r#"{"depths": [0, 1]}"#);
    let o = supercheq(&["ee-scan", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error:"));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_keys_and_bad_nonces_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", r#"{"n_qubits": 4, "layers": 3}"#);
    let o = supercheq(&["ee-scan", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("layers"));
    assert_eq!(supercheq(&["bounds", "--nonce", "xyz"]).status.code(), Some(2));
    assert_eq!(supercheq(&["bounds", "--config", "/nonexistent.json"]).status.code(), Some(2));
    let model = write_config(&dir, "m.json", r#"{"models": [{"model": "pauli", "p_x": 0.1}]}"#);
    assert_eq!(supercheq(&["noise-scan", "--config", &model]).status.code(), Some(2));
}

#[test]
fn noise_scan_defaults_and_capacity() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", r#"{"seed_bits": [3], "depths": [1, 2]}"#);
    let o = supercheq(&["noise-scan", "--config", &cfg]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    assert!(header.contains(r#""model":"pauli","p_x":0.001,"p_y":0.003,"p_z":0.001"#));
    assert!(header.contains(r#""t1_us":50.0,"t2_us":70.0,"t_1q_ns":100.0,"t_2q_ns":300.0"#));
    assert!(header.contains(r#""probability":0.01"#));
    assert_eq!(data_rows(&text).len(), 4 * 2);

    let big = write_config(&dir, "big.json", r#"{"seed_bits": [12], "depths": [1]}"#);
    let o = supercheq(&["noise-scan", "--config", &big]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("capacity"));
}

#[test]
fn noiseless_noise_scan_matches_ee_scan() {
    let dir = TempDir::new().unwrap();
    let ee = write_config(
        &dir,
        "ee.json",
        r#"{"n_qubits": 3, "depths": [1, 2, 4], "families": ["fully_connected_gr"],
            "files": 8, "file_width": 3, "trials": 1, "nonce": "0102"}"#,
    );
    // trial 0 of a scan uses master || u32_be(0)
    let noise = write_config(
        &dir,
        "noise.json",
        r#"{"seed_bits": [3], "depths": [1, 2, 4], "models": [{"model": "none"}],
            "nonce": "010200000000"}"#,
    );
    let a = supercheq(&["ee-scan", "--config", &ee]);
    let b = supercheq(&["noise-scan", "--config", &noise]);
    assert!(a.status.success() && b.status.success());
    let ee_rows: Vec<f64> = data_rows(&stdout(&a))
        .iter()
        .filter(|r| r[0] == "fully_connected_gr")
        .map(|r| r[5].parse().unwrap())
        .collect();
    let noise_rows: Vec<f64> = data_rows(&stdout(&b)).iter().map(|r| r[3].parse().unwrap()).collect();
    assert_eq!(ee_rows.len(), 3);
    for (x, y) in ee_rows.iter().zip(&noise_rows) {
        assert!((x - y).abs() < 1e-9, "{x} vs {y}");
    }
}

#[test]
fn emit_matrix_writes_a_sidecar() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", r#"{"n_qubits": 3, "depths": [2], "files": 6, "trials": 1}"#);
    let o = supercheq(&["ee-scan", "--config", &cfg, "--emit-matrix"]);
    assert_eq!(o.status.code(), Some(2));
    let out = dir.path().join("scan.csv");
    let o = supercheq(&["ee-scan", "--config", &cfg, "--emit-matrix", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let matrices = read(&dir.path().join("scan.matrices.csv"));
    // two families (grid, fully connected) and Haar, 6 × 6 each
    assert_eq!(data_rows(&matrices).len(), 3 * 36);
    let json = supercheq(&["ee-scan", "--config", &cfg, "--emit-matrix", "--json"]);
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["matrices"].as_array().unwrap().len(), 3);
    assert_eq!(v["config"]["files"], 6);
}

#[test]
fn ie_demo_walkthrough() {
    let o = supercheq(&["ie-demo"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("n=6 qubits"));
    assert!(text.contains("circuit: 6 H, 10 CZ"));
    assert!(text.contains("flip bit 0; toggled edge (1,0), one CZ"));
    assert!(text.contains("VERIFIED"));
    assert!(text.contains("fidelity to original: 0.25"));

    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "cfg.json",
        r#"{"file": "1011", "edits": [{"op": "write", "index": 1, "value": true},
            {"op": "resize", "length": 12}, {"op": "flip", "index": 11}]}"#,
    );
    let o = supercheq(&["ie-demo", "--config", &cfg, "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let steps = v["steps"].as_array().unwrap();
    assert!(steps.iter().all(|s| s["verified"] == true));
    assert_eq!(steps[1]["fidelity_to_previous"], Value::Null);
    assert_eq!(steps[2]["toggled_edges"].as_array().unwrap().len(), 1);
    assert_eq!(v["edited_file"], "111100000001");

    let bad = write_config(&dir, "bad.json", r#"{"file": "101", "edits": [{"op": "flip", "index": 7}]}"#);
    assert_eq!(supercheq(&["ie-demo", "--config", &bad]).status.code(), Some(2));
    let shrink = write_config(&dir, "shrink.json", r#"{"file": "101", "edits": [{"op": "resize", "length": 2}]}"#);
    assert_eq!(supercheq(&["ie-demo", "--config", &shrink]).status.code(), Some(2));
    let op = write_config(&dir, "op.json", r#"{"edits": [{"op": "erase", "index": 0}]}"#);
    assert_eq!(supercheq(&["ie-demo", "--config", &op]).status.code(), Some(2));
}

#[test]
fn smp_sessions() {
    let o = supercheq(&["smp"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("M = 20 copies"));
    assert!(text.contains("decision: equal"));

    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "cfg.json",
        r#"{"file_a": "101010110111011", "file_b": "101010110111010", "epsilon": 0.125}"#,
    );
    let o = supercheq(&["smp", "--config", &cfg, "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let t = &v["transcript"];
    assert_eq!((t["N"].as_u64(), t["M"].as_u64()), (Some(15), Some(3)));
    assert_eq!(t["qubits_sent"], 36);
    assert_eq!(t["classical_naive_bits"], 30);
    assert_eq!(t["classical_optimal_bits"], 21);

    let ee = write_config(
        &dir,
        "ee.json",
        r#"{"file_a": "1100", "file_b": "1100", "test": "destructive",
            "protocol": {"kind": "ee", "encoding": {"variant": {"kind": "haar"}, "n_qubits": 3}}}"#,
    );
    let o = supercheq(&["smp", "--config", &ee]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("decision: equal"));
}

#[test]
fn bounds_table() {
    let o = supercheq(&["bounds"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let (bounds, sizes) = text.split_once("# sizes\n").unwrap();
    let rows = data_rows(bounds);
    assert_eq!(rows.len(), 29);
    let collision: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    let n20 = rows.iter().find(|r| r[0] == "20").unwrap();
    let headline: f64 = n20[3].parse().unwrap();
    assert!((headline + 9200.13).abs() < 0.01);
    assert!(collision[1..].windows(2).all(|w| w[1] < w[0]));
    let n15 = data_rows(&format!("h\n{sizes}")).into_iter().find(|r| r[0] == "15").unwrap();
    assert_eq!(n15[1], "6");

    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "cfg.json", r#"{"n_min": 3, "n_max": 5}"#);
    let o = supercheq(&["bounds", "--config", &cfg, "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let ns: Vec<u64> = v["bounds"].as_array().unwrap().iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![3, 4, 5, 20]);
}

#[test]
fn help_documents_csv_columns() {
    for (cmd, column) in [
        ("ee-scan", "haar_baseline"),
        ("noise-scan", "min_self_overlap"),
        ("bounds", "log10_haar_collision"),
        ("ie-demo", "VERIFIED"),
        ("smp", "fidelity_cap"),
    ] {
        let o = supercheq(&[cmd, "--help"]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.contains(column), "{cmd}");
        for flag in ["--config", "--nonce", "--out", "--jobs"] {
            assert!(text.contains(flag), "{cmd} {flag}");
        }
    }
    assert_eq!(supercheq(&["frobnicate"]).status.code(), Some(2));
}
