//! The `tropjac` binary end to end.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::data_path;
use serde_json::Value;

fn tropjac(args: &[&str], cwd: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tropjac"));
    cmd.args(args);
    if let Some(dir) = cwd {
        cmd.current_dir(dir);
    }
    cmd.output().expect("binary runs")
}

fn run_json(sub: &str, file: &str, extra: &[&str]) -> Value {
    let input = data_path(file);
    let mut args = vec![sub, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = tropjac(&args, None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn code(sub: &str, file: &str, extra: &[&str]) -> i32 {
    let input = data_path(file);
    let mut args = vec![sub, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    tropjac(&args, None).status.code().unwrap()
}

#[test]
fn analyze_unit_k4() {
    let v = run_json("analyze", "k4_unit.json", &[]);
    assert_eq!(v["genus"], 3);
    assert_eq!(v["type"], "K4");
    assert_eq!(v["jacobian"]["lattice"], "4");
    assert_eq!(v["jacobian"]["Q"][0], serde_json::json!(["3", "-1", "-1"]));
}

#[test]
fn analyze_tree_has_no_jacobian() {
    let v = run_json("analyze", "tree.json", &[]);
    assert_eq!(v["genus"], 0);
    assert!(v.get("jacobian").is_none());
}

#[test]
fn ceresa_reports() {
    let v = run_json("ceresa", "k4_unit.json", &[]);
    assert_eq!(v["verdict"], "certified-inequivalent");
    assert_eq!(v["invariant"], "1");
    assert_eq!(v["lattice"], "4");
    let s = run_json("ceresa", "k4_symbolic.json", &[]);
    assert_eq!(s["symbolic"]["member"], false);
    let h = run_json("ceresa", "hyperelliptic.json", &["--mode", "both"]);
    assert_eq!(h["verdict"], "inconclusive");
    assert_eq!(h["symbolic"]["member"], true);
    let g4 = run_json("ceresa", "genus4_k4_digon.json", &[]);
    assert_eq!(g4["k_range"], serde_json::json!([1, 2]));
    assert_eq!(g4["verdict"], "certified-inequivalent");
}

#[test]
fn seeded_translation_check_agrees() {
    let v = run_json("ceresa", "k4_unit.json", &["--seed", "7"]);
    assert_eq!(v["translation_check"]["agrees"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(code("analyze", "malformed.json", &[]), 2);
    assert_eq!(code("ceresa", "genus2.json", &[]), 3);
    assert_eq!(code("ceresa", "k4_symbolic.json", &["--mode", "numeric"]), 2);
    assert_eq!(code("export", "tree.json", &[]), 3);
    assert_eq!(code("analyze", "does_not_exist.json", &[]), 2);
}

#[test]
fn reruns_are_byte_identical() {
    let input = data_path("k4_unit.json");
    let args = ["ceresa", "--input", input.to_str().unwrap(), "--mode", "both", "--seed", "3"];
    let a = tropjac(&args, None);
    let b = tropjac(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn export_defaults_to_working_directory() {
    let dir = tempfile::tempdir().unwrap();
    let input = data_path("k4_unit.json");
    let out = tropjac(&["export", "--input", input.to_str().unwrap()], Some(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let read = |name: &str| -> Value {
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap()
    };
    assert_eq!(read("w1.json")["cells"].as_array().unwrap().len(), 6);
    assert_eq!(read("w1_minus.json")["cells"].as_array().unwrap().len(), 6);
    assert_eq!(read("zonotope.json")["vertices"].as_array().unwrap().len(), 24);
    assert!(dir.path().join("chain.json").exists());
}

#[test]
fn export_of_a_loop() {
    let dir = tempfile::tempdir().unwrap();
    let input = data_path("loop.json");
    let out = tropjac(
        &["export", "--input", input.to_str().unwrap(), "--output", dir.path().to_str().unwrap()],
        None,
    );
    assert!(out.status.success());
    let w1: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w1.json")).unwrap()).unwrap();
    assert_eq!(w1["cells"].as_array().unwrap().len(), 1);
    assert!(!dir.path().join("chain.json").exists());
}
