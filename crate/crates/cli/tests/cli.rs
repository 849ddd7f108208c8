use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapql")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("one JSON record")
}

fn values(rec: &Value) -> Vec<(String, String)> {
    rec["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["player"].as_str().unwrap().to_string(), v["value"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn recipe_values_reduced() {
    let rec = json(&["shapley", "--kb", &corpus("recipe.kbq"), "--query", &corpus("recipe.query")]);
    let mut got: Vec<String> = values(&rec).into_iter().map(|(_, v)| v).collect();
    got.sort();
    assert_eq!(got, ["1/12", "1/12", "1/4", "7/12"]);
    for method in ["permutation", "supports"] {
        let other = json(&[
            "shapley", "--kb", &corpus("recipe.kbq"), "--query", &corpus("recipe.query"), "--method", method,
        ]);
        assert_eq!(values(&other), values(&rec), "{method}");
    }
}

#[test]
fn sampler_reports_budget_and_seed() {
    let rec = json(&[
        "shapley", "--kb", &corpus("recipe.kbq"), "--query", &corpus("recipe.query"), "--method", "sample", "--seed", "7",
    ]);
    assert_eq!(rec["seed"], 7);
    for v in rec["values"].as_array().unwrap() {
        assert_eq!(v["samples"], 738);
    }
}

#[test]
fn supports_are_listed() {
    let rec = json(&["supports", "--kb", &corpus("recipe.kbq"), "--query", &corpus("recipe.query")]);
    assert_eq!(rec["count"], 2);
    let s = rec["supports"].as_array().unwrap();
    assert_eq!(s[0].as_array().unwrap().len(), 2);
    assert_eq!(s[1].as_array().unwrap().len(), 3);
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["shapley", "--kb", "/nonexistent.kbq", "--query", &corpus("recipe.query")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn regime_violation_exits_2() {
    let args = ["pqe", "--kb", &corpus("recipe.kbq"), "--query", &corpus("recipe.query"), "--regime", "half"];
    assert_eq!(run(&args).status.code(), Some(2));
    let prob = ["pqe", "--kb", &corpus("recipe_prob.kbq"), "--query", &corpus("recipe.query")];
    // Exogenous facts are certain, so this file sits in the {1/2, 1} regime.
    assert_eq!(run(&[&prob[..], &["--regime", "half"]].concat()).status.code(), Some(2));
    let rec = json(&[&prob[..], &["--regime", "half-one"]].concat());
    assert_eq!(rec["probability"], "5/16");
}

#[test]
fn st_count_on_triangle() {
    let rec = json(&["lab", "st-count", "--graph", &corpus("triangle.graph")]);
    assert_eq!(rec["via_shapley"], 5);
    assert_eq!(rec["brute"], 5);
    assert_eq!(rec["match"], true);
}

#[test]
fn is_count_and_bijection() {
    let rec = json(&["lab", "is-count", "--fixture", &corpus("restricted.fixture"), "--graph", &corpus("k22.bip")]);
    assert_eq!(rec["via_shapley"], 7);
    assert_eq!(rec["match"], true);
    let rec = json(&[
        "lab", "verify-bijection", "--fixture", &corpus("restricted.fixture"), "--graph", &corpus("k22.bip"),
    ]);
    assert_eq!(rec["holds"], true);
}

#[test]
fn consistency_verdict() {
    let rec = json(&["consistency", "--kb", &corpus("vegetarian.kbq")]);
    assert_eq!(rec["consistent"], false);
    let rec = json(&["consistency", "--kb", &corpus("recipe.kbq")]);
    assert_eq!(rec["consistent"], true);
}

#[test]
fn output_independent_of_threads() {
    let base = ["shapley", "--kb", &corpus("recipe.kbq"), "--query", &corpus("recipe.query"), "--method", "sample"];
    let one = run(&[&["--threads", "1"][..], &base[..]].concat());
    let four = run(&[&["--threads", "4"][..], &base[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}
