use std::fs;
use std::path::Path;
use std::process::Command;

use bicyclic::group::GroupFile;
use bicyclic::{invariants, FamilySpec};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_bicyclic"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn construct_smallest_janko_group() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("j.json");
    let p = path.to_str().unwrap();
    let (code, v) = run(&[
        "construct", "--family", "janko", "--n", "2", "--m", "2", "--i", "2", "--xsq", "0", "--apow", "0", "--out", p,
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["results"]["order"], 32);
    let file = GroupFile::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.order, 32);
}

#[test]
fn analyze_round_trip_matches_memory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let p = path.to_str().unwrap();
    assert_eq!(run(&["construct", "--family", "wreath", "--n", "2", "--out", p]).0, 0);
    let (code, v) = run(&["analyze", "--input", p]);
    assert_eq!(code, 0);
    let g = FamilySpec::Wreath { n: 2 }.build().unwrap();
    let inv = serde_json::to_value(invariants::structural_invariants(&g)).unwrap();
    let shape = serde_json::to_value(invariants::classify_shape(&g)).unwrap();
    assert_eq!(v["results"]["invariants"], inv);
    assert_eq!(v["results"]["shape"], shape);
    assert_eq!(v["results"]["shape"]["metacyclic"], false);
}

#[test]
fn semidihedral_sixteen_has_two_candidate_classes() {
    let (code, v) = run(&["essential", "--family", "semidihedral", "--order", "16"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["candidate_class_count"], 2);
    let types: Vec<&str> = v["results"]["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["iso_type"].as_str().unwrap())
        .collect();
    assert_eq!(types, vec!["C2sq", "Q8_small"]);
}

#[test]
fn fusion_verdict_for_janko_group() {
    let (code, v) = run(&["fusion", "--family", "janko", "--n", "2", "--m", "2", "--i", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["verdict"]["fs_count"], 2);
    assert_eq!(v["results"]["verdict"]["matched_case"]["case"], 10);
}

#[test]
fn count_table_to_order_sixty_four() {
    let (code, v) = run(&["count", "--max-order", "6"]);
    assert_eq!(code, 0);
    let table = v["results"]["table"].as_array().unwrap();
    let f: Vec<u64> = table[1..].iter().map(|r| r["f_empirical"].as_u64().unwrap()).collect();
    let g: Vec<u64> = table[1..].iter().map(|r| r["g_empirical"].as_u64().unwrap()).collect();
    assert_eq!(f, vec![1, 2, 5, 7, 14]);
    assert_eq!(g, vec![1, 3, 9, 14, 20]);
}

#[test]
fn max_order_accepts_order_or_exponent() {
    let (_, a) = run(&["count", "--max-order", "5"]);
    let (_, b) = run(&["count", "--max-order", "32"]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(run(&["count", "--max-order", "48"]).0, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["nonsense"]).0, 2);
    let (code, v) = run(&["analyze", "--family", "dihedral"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("--order"));
    let (code, v) = run(&["essential", "--family", "direct_C2m_x_C2sq", "--m", "1"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("not bicyclic"));
}

fn corrupt_one_table(dir: &Path) {
    let path = dir.join("order16_idx0.json");
    let mut file: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let mult = file["mult"].as_array_mut().unwrap();
    mult.swap(17, 18);
    fs::write(&path, file.to_string()).unwrap();
}

#[test]
fn cache_warm_restart_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let (code, cold) = run(&["census", "--max-order", "4", "--cache", cache]);
    assert_eq!(code, 0);
    assert!(dir.path().join("manifest.json").exists());
    assert!(dir.path().join("order16_idx0.json").exists());
    let (code, warm) = run(&["census", "--max-order", "4", "--cache", cache]);
    assert_eq!(code, 0);
    assert_eq!(strip_timing(cold), strip_timing(warm));

    corrupt_one_table(dir.path());
    let (code, v) = run(&["census", "--max-order", "4", "--cache", cache]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("corrupted cache"));
}

#[test]
fn verify_is_clean_and_deterministic() {
    let (code, a) = run(&["verify", "--max-order", "5"]);
    assert_eq!(code, 0, "{a}");
    assert_eq!(a["violations"].as_array().unwrap().len(), 0);
    let (_, b) = run(&["--jobs", "1", "verify", "--max-order", "5"]);
    assert_eq!(strip_timing(a), strip_timing(b));
}

#[test]
fn numtheory_scan() {
    let (code, v) = run(&["numtheory", "--family", "gl2", "--n", "3", "--r-max", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["exponent"]["value"], "84");
    assert_eq!(run(&["numtheory", "--family", "e8"]).0, 2);
}

#[test]
fn text_format_renders_table() {
    let out = Command::new(env!("CARGO_BIN_EXE_bicyclic"))
        .args(["--format", "text", "count", "--max-order", "3"])
        .output()
        .unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("count: pass"));
    assert!(s.contains("   3      2       2      3       3"));
}
