use gmpres_wasm::{path_ideal, path_ideal_js, resolve_ideal, resolve_ideal_js, substitute};
use serde_json::Value;

const EXPANSION: &str = include_str!("../../../instances/expansion_x2y_xy2.json");

#[test]
fn resolves_the_maximal_ideal() {
    let v = resolve_ideal(r#"{"generators": [[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
    assert_eq!(v["ranks"], serde_json::json!([1, 3, 3, 1]));
    assert_eq!(v["betti"]["regularity"], 1);
    assert!(v["betti"]["triangle"].as_str().unwrap().contains("total: 1 3 3 1"));
}

#[test]
fn expansion_with_checks() {
    let v = substitute(EXPANSION, true).unwrap();
    assert_eq!(v["ideal"].as_array().unwrap().len(), 12);
    assert_eq!(v["betti"]["regularity"], 3);
    assert_eq!(v["projective_dimension_formula"], 4);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| !c.as_str().unwrap().starts_with("[FAIL]")));
}

#[test]
fn path_ideals_agree() {
    let v = path_ideal("2, 2", 2).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 4);
    assert_eq!(v["agrees"], true);
    assert!(path_ideal("2,x", 2).is_err());
}

#[test]
fn errors_come_back_as_json() {
    let v: Value = serde_json::from_str(&resolve_ideal_js("not json")).unwrap();
    assert!(v["error"].is_string());
    let v: Value = serde_json::from_str(&path_ideal_js("3", 2)).unwrap();
    assert!(v["error"].as_str().unwrap().contains("two"));
}
