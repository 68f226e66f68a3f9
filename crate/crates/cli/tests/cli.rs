use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    root.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adams-bar")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn dims(v: &Value, key: &str) -> Vec<u64> {
    v[key].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn coaction_check_on_e4_passes() {
    let out = run(&["coaction-check", "--base", &fixture("e1.cdga"), "--total", &fixture("e4.cdga"), "--wt-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["coaction_split"], r["coaction_conn"]);
    for key in ["weights", "kernel_dims", "base_dims", "total_dims", "coaction_split", "coaction_conn", "verdict"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn pi1_demo_three_punctures() {
    let out = run(&["pi1-demo", "--punctures", "3", "--wt-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(dims(&r, "gamma_dims"), vec![2, 1, 2, 3]);
    assert!(r["note"].as_str().unwrap().contains("not the motivic"));
}

#[test]
fn broken_fixture_fails_with_witness() {
    let out = run(&["validate", &fixture("broken.cdga")]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["verdict"], "fail");
    assert_eq!(r["witnesses"][0]["check"], "d squared");
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["validate", &fixture("e1.cdga"), "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "/no/such/file.cdga"]).status.code(), Some(2));
    let out = run(&["validate", &fixture("e3_pair.mod")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1, column 1"));
}

#[test]
fn reports_are_byte_identical_and_sorted() {
    let args = ["bar-h0", &fixture("e3.cdga"), "--wt-max", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(dims(&r, "dims"), vec![2, 4, 6]);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["colie", &fixture("e2.cdga"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(dims(&r, "dims"), vec![2, 1, 2, 3]);
    assert_eq!(r["cobracket"]["2.0"]["1.0|1.1"], "-1");
}

#[test]
fn cohomology_of_e3() {
    let r = report(&run(&["cohomology", &fixture("e3.cdga"), "--wt-max", "2", "--deg-max", "2"]));
    assert_eq!(r["dims"]["1,1"], 2);
    assert!(r["dims"].get("1,2").is_none());
    assert!(r["dims"].get("2,2").is_none());
}

#[test]
fn relative_commands() {
    let args = ["kernel", "--base", &fixture("e1.cdga"), "--total", &fixture("e4prime.cdga"), "--wt-max", "3"];
    let r = report(&run(&args));
    assert_eq!(r["verdict"], "pass");
    assert_eq!(dims(&r, "total_dims"), dims(&r, "predicted_dims"));
    let out = run(&["minimal-model", &fixture("e4.cdga"), "--base", &fixture("e1.cdga"), "--n", "2", "--wt-max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let names: Vec<&str> = r["generators"].as_array().unwrap().iter().map(|g| g["name"].as_str().unwrap()).collect();
    assert_eq!(names, vec!["x", "u", "v"]);
    let mismatch = run(&["kernel", "--base", &fixture("e3.cdga"), "--total", &fixture("e4.cdga")]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn quillen_and_delta() {
    let r = report(&run(&["quillen", &fixture("e2.cdga"), "--wt-max", "3"]));
    assert_eq!(r["verdict"], "pass");
    assert_eq!(dims(&r, "qa_dims"), vec![2, 1, 2]);
    let r = report(&run(&["delta-approx", &fixture("e2.cdga"), "--n", "2", "--wt-max", "2"]));
    assert_eq!(r["verdict"], "pass");
    assert_eq!(dims(&r, "full"), vec![2, 4]);
    let r = report(&run(&["delta-approx", &fixture("e4.cdga"), "--base", &fixture("e1.cdga"), "--n", "2", "--wt-max", "2"]));
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn module_report() {
    let out = run(&["module", &fixture("e3_pair.mod"), "--over", &fixture("e3.cdga")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["in_heart"], true);
    assert_eq!(r["q_cohomology"]["0,1"], 1);
}
