//! wasm-bindgen exports for the static page in `www/`. Every export returns
//! a JSON string, either a result object or `{"error": "..."}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use oshima_core::finite_part::{finite_part, BumpProfile};
use oshima_core::haar::from_iwasawa;
use oshima_core::sphere::{classify, fixed_points_on_sphere, Conjugacy, SphereFixedPoint};
use oshima_core::trace::transversal_trace_pointwise;
use oshima_core::GroupElement;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest number of samples a curve export will compute.
pub const MAX_SAMPLES: usize = 2000;

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(value) => serde_json::to_string(&value).expect("serializable"),
        Err(message) => serde_json::json!({ "error": message }).to_string(),
    }
}

fn check_samples(samples: usize) -> Result<(), String> {
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must be between 2 and {MAX_SAMPLES}"));
    }
    Ok(())
}

#[derive(Serialize)]
struct FixedPointView {
    conjugacy: Conjugacy,
    fixed_points: Vec<SphereFixedPoint>,
    /// `None` when some fixed point is degenerate.
    transversal_trace: Option<f64>,
}

fn fixed_point_view(a: f64, b: f64, c: f64, d: f64) -> Result<FixedPointView, String> {
    let g = GroupElement::normalized(
        oshima_core::SquareMatrix::from_rows(&[vec![a, b], vec![c, d]])
            .map_err(|e| e.to_string())?
            .into_mat(),
    )
    .map_err(|e| e.to_string())?;
    Ok(FixedPointView {
        conjugacy: classify(&g).map_err(|e| e.to_string())?,
        fixed_points: fixed_points_on_sphere(&g).map_err(|e| e.to_string())?,
        transversal_trace: transversal_trace_pointwise(&g).ok(),
    })
}

/// Fixed points of `g = (a b; c d)` on the sphere, rescaled to determinant
/// one, with `Σ 1/|det(1 - dΦ)|`.
#[wasm_bindgen]
pub fn sphere_fixed_points(a: f64, b: f64, c: f64, d: f64) -> String {
    to_json(fixed_point_view(a, b, c, d))
}

#[derive(Serialize)]
struct Curve {
    x: Vec<f64>,
    /// `null` where the value is undefined.
    y: Vec<Option<f64>>,
}

fn trace_curve(family: &str, from: f64, to: f64, samples: usize) -> Result<Curve, String> {
    check_samples(samples)?;
    let element: fn(f64) -> GroupElement = match family {
        "elliptic" => |theta| from_iwasawa(theta, 0.0, 0.0),
        "hyperbolic" => |s| from_iwasawa(0.0, s, 0.0),
        other => return Err(format!("unknown family `{other}`")),
    };
    let x: Vec<f64> = (0..samples)
        .map(|i| from + (to - from) * i as f64 / (samples - 1) as f64)
        .collect();
    let y = x
        .iter()
        .map(|&p| transversal_trace_pointwise(&element(p)).ok().filter(|v| v.is_finite()))
        .collect();
    Ok(Curve { x, y })
}

/// `Tr♭π(g)` along rotations `k_θ` (`family = "elliptic"`) or along
/// `a_s = diag(e^{s/2}, e^{-s/2})` (`family = "hyperbolic"`).
#[wasm_bindgen]
pub fn transversal_trace_curve(family: &str, from: f64, to: f64, samples: usize) -> String {
    to_json(trace_curve(family, from, to, samples))
}

#[derive(Serialize)]
struct FinitePartCurve {
    x: Vec<f64>,
    /// Finite part at each sample; at a pole this is the constant term.
    y: Vec<f64>,
    /// `(location, residue)` for every pole in range.
    poles: Vec<(i32, f64)>,
}

fn part_curve(radius: f64, from: f64, to: f64, samples: usize) -> Result<FinitePartCurve, String> {
    check_samples(samples)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err("radius must be positive".into());
    }
    let phi = BumpProfile::unit(radius);
    let x: Vec<f64> = (0..samples)
        .map(|i| from + (to - from) * i as f64 / (samples - 1) as f64)
        .collect();
    let y = x
        .iter()
        .map(|&s| finite_part(&phi, Complex64::new(s, 0.0)).value.re)
        .collect();
    let lowest = from.min(to).ceil() as i32;
    let poles = (lowest..=-1)
        .filter_map(|k| finite_part(&phi, Complex64::new(k as f64, 0.0)).pole)
        .filter(|p| p.residue.abs() > 1e-14 && (p.location as f64) <= from.max(to))
        .map(|p| (p.location, p.residue))
        .collect();
    Ok(FinitePartCurve { x, y, poles })
}

/// The continuation of `∫|t|^s φ(t) dt` on real `s` for a unit bump of
/// half width `radius`; poles sit at negative odd integers.
#[wasm_bindgen]
pub fn finite_part_curve(radius: f64, from: f64, to: f64, samples: usize) -> String {
    to_json(part_curve(radius, from, to, samples))
}

/// `2π`, so the page does not hard-code the rotation period.
#[wasm_bindgen]
pub fn rotation_period() -> f64 {
    2.0 * PI
}
