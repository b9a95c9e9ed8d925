use oshima_web::{finite_part_curve, sphere_fixed_points, transversal_trace_curve};
use serde_json::Value;

fn parse(text: String) -> Value {
    serde_json::from_str(&text).unwrap()
}

#[test]
fn rotation_has_two_fixed_points_with_closed_form_trace() {
    let theta = std::f64::consts::PI / 3.0;
    let (s, c) = theta.sin_cos();
    let view = parse(sphere_fixed_points(c, -s, s, c));
    assert_eq!(view["conjugacy"], "elliptic");
    assert_eq!(view["fixed_points"].as_array().unwrap().len(), 2);
    // each point contributes 1/|1 - e^{2iθ}|² = 1/3
    let trace = view["transversal_trace"].as_f64().unwrap();
    assert!((trace - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn matrices_are_rescaled_and_errors_reported() {
    let view = parse(sphere_fixed_points(4.0, 0.0, 0.0, 1.0));
    assert_eq!(view["conjugacy"], "hyperbolic");
    // λ = 2: 1/(1-4)² + 1/(1-1/4)² on the boundary
    let expected = 1.0 / 9.0 + 16.0 / 9.0;
    assert!((view["transversal_trace"].as_f64().unwrap() - expected).abs() < 1e-12);

    let unipotent = parse(sphere_fixed_points(1.0, 1.0, 0.0, 1.0));
    assert!(unipotent["transversal_trace"].is_null());
    assert!(parse(sphere_fixed_points(1.0, 0.0, 0.0, 1.0))["error"].is_string());
    assert!(parse(sphere_fixed_points(1.0, 2.0, 2.0, 4.0))["error"].is_string());
}

#[test]
fn trace_curves() {
    let curve = parse(transversal_trace_curve("elliptic", 0.0, std::f64::consts::PI, 5));
    let y = curve["y"].as_array().unwrap();
    assert!(y[0].is_null());
    let mid = y[2].as_f64().unwrap();
    assert!((mid - 0.5).abs() < 1e-12);
    let curve = parse(transversal_trace_curve("hyperbolic", 0.5, 2.0, 4));
    assert!(curve["y"].as_array().unwrap().iter().all(Value::is_f64));
    assert!(parse(transversal_trace_curve("loxodromic", 0.0, 1.0, 4))["error"].is_string());
    assert!(parse(transversal_trace_curve("elliptic", 0.0, 1.0, 1))["error"].is_string());
}

#[test]
fn finite_part_curve_reports_poles() {
    let curve = parse(finite_part_curve(1.0, -4.0, 1.0, 11));
    let poles = curve["poles"].as_array().unwrap();
    let locations: Vec<i64> = poles.iter().map(|p| p[0].as_i64().unwrap()).collect();
    assert_eq!(locations, [-3, -1]);
    // residue at -1 is 2φ(0)
    assert!((poles[1][1].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert_eq!(curve["y"].as_array().unwrap().len(), 11);
    assert!(parse(finite_part_curve(-1.0, 0.0, 1.0, 3))["error"].is_string());
}
