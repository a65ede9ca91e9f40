use cubic_brauer_web::{analyze, classify, curve_points};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn classify_returns_the_report() {
    let v = parse(classify("x^3+y^3+z^3+5*w^3", 5));
    assert_eq!(v["reduction"]["type"], "ConeOverSmoothCubic");
    assert_eq!(v["cone"]["s"], 1);
}

#[test]
fn curve_points_of_the_fermat_cubic() {
    let v = parse(curve_points("x^3+y^3+z^3", 5));
    assert_eq!(v["curve"]["point_count"], 6);
    assert_eq!(v["curve"]["group"], serde_json::json!([6]));
}

#[test]
fn analyze_with_default_precision() {
    let v = parse(analyze("x^3+y^3+z^3+5*w^3", 5, 0));
    assert_eq!(v["outcome"], "verdict");
    assert_eq!(v["precision"], 24);
    assert_eq!(v["cohomology"]["h1_invariants"], serde_json::json!([3, 3]));
}

#[test]
fn errors_are_reported_as_json() {
    let v = parse(classify("x^3+y^3+z^3+5*w^3", 4));
    assert!(v["error"].as_str().unwrap().contains("p = 4"));
    let v = parse(analyze("x^3 + *", 5, 0));
    assert!(v["error"].as_str().unwrap().starts_with("line 1, column"));
    let v = parse(curve_points("x^3+w^3", 5));
    assert!(v["error"].is_string());
}
