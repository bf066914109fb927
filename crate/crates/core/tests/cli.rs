use std::process::{Command, Output};

use serde_json::Value;

fn rmflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmflab")).args(args).output().expect("run rmflab")
}

fn json(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).expect("one JSON line")
}

#[test]
fn psi_record() {
    let out = rmflab(&["psi", "--x", "100", "--y", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["subcommand"], "psi");
    assert_eq!(v["payload"]["psi"], 34);
    assert_eq!(v["params"]["x"], 100);
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn rho_and_alpha() {
    let v = json(&rmflab(&["rho", "--u", "2"]));
    assert!((v["payload"]["rho"].as_f64().unwrap() - 0.306_852_819_44).abs() < 1e-10);
    let v = json(&rmflab(&["alpha", "--x", "2.718281828459045", "--y", "2"]));
    let a = v["payload"]["alpha"].as_f64().unwrap();
    assert!((a - (1.0 + 2f64.ln()).log2()).abs() < 1e-9);
}

#[test]
fn simulate_exhaustive() {
    let v = json(&rmflab(&["simulate", "lplus", "--x", "5", "--y", "2", "--exhaustive"]));
    assert_eq!(v["payload"]["p_hat"], 1.0);
    assert_eq!(v["payload"]["mode"], "exhaustive");
    assert_eq!(v["payload"]["seed"], Value::Null);
}

#[test]
fn seed_is_echoed() {
    let v = json(&rmflab(&["simulate", "event-a", "--cutoff", "100", "--trials", "50", "--seed", "9"]));
    assert_eq!(v["payload"]["seed"], 9);
    assert_eq!(v["params"]["seed"], 9);
    assert_eq!(v["payload"]["truncated_at"], 100);
}

#[test]
fn exit_codes() {
    assert_eq!(rmflab(&["simulate", "event-a", "--cutoff", "100"]).status.code(), Some(2));
    assert_eq!(rmflab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(rmflab(&["psi", "--x", "10"]).status.code(), Some(2));
    assert_eq!(rmflab(&["ratios", "--x", "1000", "--eps", "1", "--model", "one"]).status.code(), Some(2));
    assert_eq!(rmflab(&["residues", "--n", "44"]).status.code(), Some(2));
    assert_eq!(rmflab(&["check", "--suite", "identities", "--seeds", "2"]).status.code(), Some(0));
    assert_eq!(rmflab(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_csv() {
    let out = rmflab(&["scan", "--x", "50", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,in_lplus,harmonic_positive,certified,least_qnr,min_fsum,min_hsum");
    assert_eq!(lines.len(), 11);
    assert!(lines[1].starts_with("53,"));
}

#[test]
fn residues_output() {
    let v = json(&rmflab(&["residues", "--n", "3"]));
    assert_eq!(v["payload"]["modulus"], 24);
    assert_eq!(v["payload"]["residues"], serde_json::json!([1]));
    let v = json(&rmflab(&["residues", "--n", "5", "--pattern", "5"]));
    assert_eq!(v["payload"]["count"], 2);
}

#[test]
fn out_file_and_env_threads() {
    let dir = std::env::temp_dir().join(format!("rmflab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("moments.json");
    let status = Command::new(env!("CARGO_BIN_EXE_rmflab"))
        .args(["moments", "--x", "4", "--q", "2", "--exact", "--out"])
        .arg(&path)
        .env("RMFLAB_THREADS", "2")
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(std::fs::read_to_string(&path).unwrap().trim()).unwrap();
    assert_eq!(v["payload"]["moment"], 6.0);
    let bad = Command::new(env!("CARGO_BIN_EXE_rmflab"))
        .args(["rho", "--u", "1"])
        .env("RMFLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reals_have_seventeen_digits() {
    let out = rmflab(&["rho", "--u", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let start = text.find("\"rho\":").unwrap() + 6;
    let digits: String = text[start..].chars().take_while(|c| c.is_ascii_digit() || *c == '.').collect();
    assert_eq!(digits.trim_start_matches("0.").len(), 17, "{digits}");
}
