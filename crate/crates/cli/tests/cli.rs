use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn instances() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

fn gmpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gmpres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn instance(name: &str) -> String {
    instances().join(name).to_string_lossy().into_owned()
}

#[test]
fn expansion_passes_its_checks() {
    let o = gmpres(&["gmpi", &instance("expansion_x2y_xy2.json"), "--check"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("reg L = 3"));
    assert!(text.contains("pd T/L = 4"));
    assert!(text.trim_end().ends_with("PASS"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn koszul_triangle() {
    let o = gmpres(&["resolve", &instance("maximal_xyz.json"), "--check"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(text.contains("total: 1 3 3 1"), "{text}");
    assert!(text.contains("    0: 1 3 3 1"));
}

#[test]
fn edges_of_k22() {
    let o = gmpres(&["family", "path-ideal", "--parts", "2,2", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("4 generators"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn json_output_carries_the_multigraded_table() {
    let o = gmpres(&["gmpi", &instance("explicit_three_blocks.json"), "--json", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["regularity"], 3);
    assert_eq!(v["status"], "PASS");
    assert!(!v["betti"]["multigraded"].as_array().unwrap().is_empty());
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "FAIL"));
}

#[test]
fn non_linear_substitution_is_not_a_failure() {
    let o = gmpres(&["gmpi", &instance("non_linear_substitution.json"), "--check"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("[HYPOTHESIS-UNMET] regularity: reg I = 3, reg L = 4"));
}

#[test]
fn random_instance_document_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seed3.json");
    let o = gmpres(&["family", "random-instance", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = gmpres::document::InstanceDocument::from_json(&text).unwrap();
    assert_eq!(gmpres::document::InstanceDocument::from_json(&doc.to_json().unwrap()).unwrap(), doc);
    let o = gmpres(&["gmpi", path.to_str().unwrap(), "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn path_instance_matches_the_direct_ideal() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.json");
    let o = gmpres(&[
        "family", "path-ideal", "--parts", "2,3", "--t", "3", "--instance", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = gmpres(&["gmpi", path.to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let direct = gmpres(&["family", "path-ideal", "--parts", "2,3", "--t", "3"]);
    let listed: Vec<String> = stdout(&direct).lines().skip(1).map(str::to_string).collect();
    let from_instance: Vec<String> = v["ideal"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g.as_str().unwrap().to_string())
        .collect();
    assert_eq!(listed, from_instance);
}

#[test]
fn single_seed_verify() {
    let o = gmpres(&["verify", "--seed", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["seed"], 5);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(gmpres(&["gmpi", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(gmpres(&["gmpi", &instance("maximal_xyz.json")]).status.code(), Some(2));
    assert_eq!(gmpres(&["resolve", &instance("expansion_x2y_xy2.json")]).status.code(), Some(2));
    assert_eq!(gmpres(&["family", "path-ideal", "--parts", "2,2", "--t", "1"]).status.code(), Some(2));
    assert_eq!(gmpres(&["family", "squarefree-veronese", "--m", "3"]).status.code(), Some(2));
    assert_eq!(gmpres(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(
        &path,
        r#"{"blocks": [{"name": "x", "size": 2}, {"name": "y", "size": 1}],
            "inducing_ideal": [[2, 0], [1, 1]],
            "substitutions": {"x:1": [[1, 0]], "x:2": [[0, 2]], "y:1": [[1]]}}"#,
    )
    .unwrap();
    let o = gmpres(&["gmpi", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nesting"));
}
