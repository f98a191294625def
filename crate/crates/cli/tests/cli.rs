use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn write_input(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn sqav(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqav")).args(&args[..1]).arg(input).args(&args[1..]).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn ints(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn star_reports_cells_and_classes() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write_input(dir.path(), "sq.json", r#"{"preset": "dim2-square"}"#);
    let out = sqav(&["star", "--verify"], &sq);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(ints(&v["result"]["counts"]), vec![1, 4, 4]);
    assert_eq!(ints(&v["result"]["classes_mod_x"]), vec![1, 2, 1]);
    assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(v["input"]["gram"], serde_json::json!([[1, 0], [0, 1]]));

    let line = write_input(dir.path(), "line.json", r#"{"rank": 1, "gram": [[2]]}"#);
    let v = json(&sqav(&["star"], &line));
    assert_eq!(ints(&v["result"]["counts"]), vec![1, 2]);
}

#[test]
fn verify_reports_cohomology_and_theta_counts() {
    let dir = tempfile::tempdir().unwrap();
    let hex = write_input(dir.path(), "hex.json", r#"{"preset": "dim2-hex"}"#);
    let out = sqav(&["verify", "--depth", "3"], &hex);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(ints(&v["result"]["cohomology"]["dims"]), vec![1, 2, 1]);
    let counts: Vec<u64> = v["result"]["theta_counts"].as_array().unwrap().iter().map(|p| p[1].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![1, 4, 9]);
    for c in v["result"]["checks"].as_array().unwrap() {
        assert!(c["id"].as_str().is_some_and(|s| !s.is_empty()));
        assert_eq!(c["pass"], true, "{c}");
    }

    let line = write_input(dir.path(), "line.json", r#"{"preset": "dim1"}"#);
    let v = json(&sqav(&["verify", "--depth", "4"], &line));
    assert_eq!(ints(&v["result"]["cohomology"]["dims"]), vec![1, 1]);
    let counts: Vec<u64> = v["result"]["theta_counts"].as_array().unwrap().iter().map(|p| p[1].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![1, 2, 3, 4]);
}

#[test]
fn e8_verify_samples_cells() {
    let dir = tempfile::tempdir().unwrap();
    let e8 = write_input(dir.path(), "e8.json", r#"{"preset": "e8-sample"}"#);
    let out = sqav(&["verify"], &e8);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["base_change"], 6);
    for s in v["result"]["samples"].as_array().unwrap() {
        assert!([2, 3].contains(&s["index"].as_u64().unwrap()));
    }
}

#[test]
fn invalid_input_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let asym = write_input(dir.path(), "asym.json", r#"{"gram": [[2, 1], [0, 2]]}"#);
    let out = sqav(&["star"], &asym);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("symmetric"));
    assert!(out.stdout.is_empty());

    let indefinite = write_input(dir.path(), "indef.json", r#"{"gram": [[1, 2], [2, 1]]}"#);
    let out = sqav(&["verify"], &indefinite);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("minor"));

    let garbage = write_input(dir.path(), "garbage.json", "{");
    assert_eq!(sqav(&["theta"], &garbage).status.code(), Some(2));
    assert_eq!(sqav(&["star"], &dir.path().join("missing.json")).status.code(), Some(2));
}

#[test]
fn rank_limit_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let i3 = write_input(dir.path(), "i3.json", r#"{"preset": "i3"}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_sqav")).arg("star").arg(&i3).env("SQAV_RANK_LIMIT", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_sqav")).arg("star").arg(&i3).env("SQAV_RANK_LIMIT", "three").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn svg_draws_rank_two_only() {
    let dir = tempfile::tempdir().unwrap();
    let hex = write_input(dir.path(), "hex.json", r#"{"preset": "dim2-hex"}"#);
    let target = dir.path().join("hex.svg");
    let out = sqav(&["svg", "--out", target.to_str().unwrap()], &hex);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&target).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("stroke-dasharray"));
    assert!(svg.contains("<polygon"));

    let i3 = write_input(dir.path(), "i3.json", r#"{"preset": "i3"}"#);
    let target = dir.path().join("i3.svg");
    let out = sqav(&["svg", "--out", target.to_str().unwrap()], &i3);
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists());
}

#[test]
fn theta_and_classify_write_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write_input(dir.path(), "sq.json", r#"{"preset": "dim2-square"}"#);
    let target = dir.path().join("theta.json");
    let out = sqav(&["theta", "--depth", "2", "--out", target.to_str().unwrap()], &sq);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["result"]["basis"]["total"], 4);
    assert_eq!(v["result"]["h0"], 4);

    let v = json(&sqav(&["classify"], &sq));
    let cells = v["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 9);
    assert!(cells.iter().all(|c| c["totally_generating"] == true && c["nilpotency"] == 1));
    assert_eq!(v["result"]["minimal_base_change"], 2);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a3 = write_input(dir.path(), "a3.json", r#"{"preset": "a3"}"#);
    for cmd in ["star", "classify", "theta"] {
        let a = sqav(&[cmd], &a3);
        let b = sqav(&[cmd], &a3);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}
