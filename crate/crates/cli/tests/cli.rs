use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ringforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringforge")).args(args).env_remove("RINGFORGE_BUDGET").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ringforge-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn classify_s3_t2_over_f2() {
    let out = ringforge(&["classify", "--p", "2", "--r", "1", "--s", "3", "--t", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["class_count"], 322);
    assert_eq!(v["ground_set_size"], 43435);
}

#[test]
fn worker_count_does_not_change_output() {
    let a = ringforge(&["classify", "--p", "3", "--s", "2", "--t", "2", "--workers", "1"]);
    let b = ringforge(&["classify", "--p", "3", "--s", "2", "--t", "2", "--workers", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = ringforge(&["congruence", "--p", "2", "--s", "3", "--workers", "3", "--format", "csv"]);
    let d = ringforge(&["congruence", "--p", "2", "--s", "3", "--format", "csv"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn counts() {
    let v = json(&ringforge(&["count", "--kind", "waterhouse", "--q", "3", "--s", "2"]));
    assert_eq!((v["value"].clone(), v["status"].clone()), (Value::from(10), Value::from("exact")));
    let v = json(&ringforge(&["count", "--kind", "prediction", "--p", "3", "--s", "2", "--t", "3"]));
    assert_eq!((v["value"].clone(), v["status"].clone()), (Value::from(7), Value::from("conjectured")));
    let v = json(&ringforge(&["count", "--kind", "t-eq-s2", "--r", "2", "--s", "2", "--lambda", "1"]));
    assert_eq!(v["value"], 6);
    let big = ringforge(&["count", "--kind", "waterhouse", "--q", "101", "--s", "30"]);
    let text = String::from_utf8(big.stdout).unwrap();
    let raw = text.split("\"value\": ").nth(1).unwrap().split(',').next().unwrap();
    assert!(raw.len() > 20 && raw.bytes().all(|b| b.is_ascii_digit()), "value not a bare integer: {raw}");
}

#[test]
fn usage_errors_exit_2_without_stdout() {
    for args in [
        vec!["classify", "--p", "4", "--s", "2", "--t", "2"],
        vec!["classify", "--p", "2", "--s", "2"],
        vec!["classify", "--p", "2", "--s", "2", "--t", "5"],
        vec!["classify", "--p", "2", "--s", "2", "--t", "1", "--strategy", "nope"],
        vec!["count", "--kind", "prediction", "--p", "3", "--s", "3", "--t", "2"],
        vec!["count", "--kind", "waterhouse", "--q", "6", "--s", "2"],
        vec!["reps", "--p", "2", "--s", "4"],
        vec!["nonsense"],
    ] {
        let out = ringforge(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn budget_from_flag_and_environment() {
    let out = ringforge(&["classify", "--p", "2", "--s", "2", "--t", "2", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let out = Command::new(env!("CARGO_BIN_EXE_ringforge"))
        .args(["classify", "--p", "2", "--s", "2", "--t", "2"])
        .env("RINGFORGE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ringforge"))
        .args(["classify", "--p", "2", "--s", "2", "--t", "2", "--budget", "100000"])
        .env("RINGFORGE_BUDGET", "10")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn iso_witness_and_rejection() {
    let a = scratch("a.json", r#"{"p":3,"r":1,"s":1,"t":1,"lambda":0,"matrices":[[[1]]],"sigma":[0],"theta":[0]}"#);
    let d = scratch("d.json", r#"{"p":3,"r":1,"s":1,"t":1,"lambda":0,"matrices":[[[2]]],"sigma":[0],"theta":[0]}"#);
    let v = json(&ringforge(&["iso", "--left", a.to_str().unwrap(), "--right", d.to_str().unwrap(), "--mode", "central"]));
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["witness"]["B"], serde_json::json!([[2]]));

    let i2 = scratch("i2.json", r#"{"p":2,"r":1,"s":2,"t":1,"lambda":0,"matrices":[[[1,0],[0,1]]],"sigma":[0,0],"theta":[0]}"#);
    let sk = scratch("sk.json", r#"{"p":2,"r":1,"s":2,"t":1,"lambda":0,"matrices":[[[0,1],[0,0]]],"sigma":[0,0],"theta":[0]}"#);
    let v = json(&ringforge(&["iso", "--left", i2.to_str().unwrap(), "--right", sk.to_str().unwrap()]));
    assert_eq!(v["isomorphic"], false);
    assert_eq!(v["witness"], Value::Null);

    let out = ringforge(&["iso", "--left", a.to_str().unwrap(), "--right", i2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    for p in [a, d, i2, sk] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn ring_report() {
    let v = json(&ringforge(&["ring", "--p", "2", "--matrices", "[[[1]]]", "--table", "8"]));
    assert_eq!(v["axioms"]["passed"], true);
    assert_eq!(v["axioms"]["triples_checked"], 512);
    assert_eq!(v["structure"]["order"], "8");
    assert_eq!(v["multiplication_table"].as_array().unwrap().len(), 8);
    let out = ringforge(&["ring", "--p", "2", "--matrices", "[[[1,0],[0,1]],[[1,0],[0,1]]]"]);
    assert_eq!(out.status.code(), Some(2), "dependent matrices are rejected");
}

#[test]
fn reps_lists() {
    let v = json(&ringforge(&["reps", "--p", "3", "--s", "3"]));
    assert_eq!(v["count"], 25);
    let v = json(&ringforge(&["reps", "--p", "2", "--s", "3", "--kind", "symmetric"]));
    assert_eq!(v["count"], 4);
}

#[test]
fn verify_fast_report() {
    let out = ringforge(&["verify"]);
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    let status = |name: &str| checks.iter().find(|c| c["name"] == name).unwrap()["status"].as_str().unwrap().to_string();
    assert_eq!(status("n22_q2"), "pass");
    assert_eq!(status("n23_q5"), "pass");
    assert_eq!(status("n32_q2"), "skipped");
    assert!(checks.iter().all(|c| c.get("runtime_ms").is_none()));
    let any_fail = checks.iter().any(|c| c["status"] == "fail");
    assert_eq!(out.status.code(), Some(if any_fail { 1 } else { 0 }));
    assert_eq!(v["exit_code"], if any_fail { 1 } else { 0 });
    assert_eq!(ringforge(&["verify"]).stdout, out.stdout);
    let timed = json(&ringforge(&["verify", "--timings", "--format", "json"]));
    assert!(timed["checks"][0].get("runtime_ms").is_some());
}

#[test]
fn verify_seeded_fault_fails_by_name() {
    let out = ringforge(&["verify", "--inject-fault", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("n22_q2,fail")), "{text}");
}
