//! Haar measure on `SL(2,R)` in Iwasawa coordinates `g = k_θ a_s n_u`,
//! smooth bump test functions, and tensor Gauss–Legendre grids.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::GroupElement;
use crate::quadrature::{integrate_3d, Axis};

/// Gauss–Legendre order on each panel.
pub const PANEL_ORDER: usize = 8;
/// Panels per axis at the default resolution.
pub const DEFAULT_PANELS: usize = 16;
/// Relative tolerance of the left-invariance validation.
pub const INVARIANCE_TOL: f64 = 1e-6;

pub fn k_theta(theta: f64) -> GroupElement {
    let (s, c) = theta.sin_cos();
    GroupElement::from_mat_unchecked(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]))
}

pub fn a_s(s: f64) -> GroupElement {
    let e = (0.5 * s).exp();
    GroupElement::from_mat_unchecked(DMatrix::from_row_slice(2, 2, &[e, 0.0, 0.0, 1.0 / e]))
}

pub fn n_u(u: f64) -> GroupElement {
    GroupElement::from_mat_unchecked(DMatrix::from_row_slice(2, 2, &[1.0, u, 0.0, 1.0]))
}

pub fn from_iwasawa(theta: f64, s: f64, u: f64) -> GroupElement {
    GroupElement::from_mat_unchecked(DMatrix::from_row_slice(2, 2, &iwasawa_entries(theta, s, u)))
}

/// Row-major entries of `k_θ a_s n_u`.
pub(crate) fn iwasawa_entries(theta: f64, s: f64, u: f64) -> [f64; 4] {
    let (sn, c) = theta.sin_cos();
    let e = (0.5 * s).exp();
    [c * e, c * e * u - sn / e, sn * e, sn * e * u + c / e]
}

/// `(θ, s, u)` with `θ ∈ (-π, π]`.
pub fn iwasawa(g: &GroupElement) -> [f64; 3] {
    coords_of_entries([g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)])
}

fn coords_of_entries([g11, g12, g21, g22]: [f64; 4]) -> [f64; 3] {
    let r = g11.hypot(g21);
    let theta = g21.atan2(g11);
    // first row of k_θᵗ g is (r, r u), with cos θ = g11/r and sin θ = g21/r
    let u = (g11 * g12 + g21 * g22) / (r * r);
    [theta, 2.0 * r.ln(), u]
}

/// Row-major entries of a `2×2` matrix; the allocation-free path for
/// inner quadrature loops.
pub(crate) type Entries = [f64; 4];

pub(crate) fn entries_of(g: &GroupElement) -> Entries {
    [g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)]
}

pub(crate) fn mul2([a11, a12, a21, a22]: Entries, [b11, b12, b21, b22]: Entries) -> Entries {
    [
        a11 * b11 + a12 * b21,
        a11 * b12 + a12 * b22,
        a21 * b11 + a22 * b21,
        a21 * b12 + a22 * b22,
    ]
}

/// Inverse of a determinant-one matrix.
pub(crate) fn inv2([a, b, c, d]: Entries) -> Entries {
    [d, -b, -c, a]
}

pub(crate) fn rotation_entries(theta: f64) -> Entries {
    let (sn, c) = theta.sin_cos();
    [c, -sn, sn, c]
}

/// Coordinates of `h · (k_θ a_s n_u)` without allocating.
fn translated_coords(h: Entries, theta: f64, s: f64, u: f64) -> [f64; 3] {
    coords_of_entries(mul2(h, iwasawa_entries(theta, s, u)))
}

pub fn trace_from_iwasawa(theta: f64, s: f64, u: f64) -> f64 {
    2.0 * theta.cos() * (0.5 * s).cosh() + theta.sin() * (0.5 * s).exp() * u
}

/// `θ - reference` reduced to `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// `ψ(v) = exp(-1/(1 - v²))` on `|v| < 1`, zero elsewhere.
pub fn psi(v: f64) -> f64 {
    if v.abs() < 1.0 {
        (-1.0 / (1.0 - v * v)).exp()
    } else {
        0.0
    }
}

/// A closed box in `(θ, s, u)`; `θ` is not reduced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IwasawaBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl IwasawaBox {
    pub fn grid_points(&self, per_axis: usize) -> impl Iterator<Item = [f64; 3]> + '_ {
        let at = move |axis: usize, i: usize| {
            self.lo[axis] + (self.hi[axis] - self.lo[axis]) * i as f64 / (per_axis - 1) as f64
        };
        (0..per_axis).flat_map(move |i| {
            (0..per_axis).flat_map(move |j| (0..per_axis).map(move |k| [at(0, i), at(1, j), at(2, k)]))
        })
    }

    /// Points on the six faces (the `θ` faces are skipped when they coincide
    /// modulo `2π`).
    pub fn face_points(&self, per_axis: usize) -> Vec<[f64; 3]> {
        let full_circle = self.hi[0] - self.lo[0] >= 2.0 * PI - 1e-12;
        self.grid_points(per_axis)
            .filter(|p| {
                (0..3).any(|a| {
                    let on_face = p[a] == self.lo[a] || p[a] == self.hi[a];
                    on_face && !(a == 0 && full_circle)
                })
            })
            .collect()
    }

    fn widened(&self, factor: f64) -> Self {
        let mut out = *self;
        for a in 0..3 {
            let pad = factor * (self.hi[a] - self.lo[a]).max(1e-3);
            out.lo[a] -= pad;
            out.hi[a] += pad;
        }
        let width = out.hi[0] - out.lo[0];
        if width > 2.0 * PI {
            let mid = 0.5 * (out.lo[0] + out.hi[0]);
            out.lo[0] = mid - PI;
            out.hi[0] = mid + PI;
        }
        out
    }
}

/// Bounding box of Iwasawa coordinates of `points`, with `θ` unwrapped
/// around the first point.
pub fn bounding_box<I: IntoIterator<Item = [f64; 3]>>(points: I) -> Option<IwasawaBox> {
    let mut iter = points.into_iter();
    let first = iter.next()?;
    let reference = first[0];
    let mut lo = first;
    let mut hi = first;
    for p in iter {
        let theta = reference + wrap_angle(p[0] - reference);
        let q = [theta, p[1], p[2]];
        for a in 0..3 {
            lo[a] = lo[a].min(q[a]);
            hi[a] = hi[a].max(q[a]);
        }
    }
    Some(IwasawaBox { lo, hi })
}

/// `f(k_θ a_s n_u) = A ψ((θ-θ₀)/w_θ) ψ((s-s₀)/w_s) ψ((u-u₀)/w_u)`, with the
/// angular difference reduced mod `2π`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupTestFunction {
    pub center: [f64; 3],
    pub half_width: [f64; 3],
    #[serde(default = "unit")]
    pub amplitude: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Elliptic,
    Hyperbolic,
}

/// Outcome of a successful support certification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub delta: f64,
    pub min_gap: f64,
    pub kind: SupportKind,
    pub grid_points: usize,
}

impl GroupTestFunction {
    pub fn new(center: [f64; 3], half_width: [f64; 3]) -> Result<Self> {
        let f = Self {
            center,
            half_width,
            amplitude: 1.0,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            amplitude: self.amplitude * c,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.center.iter().chain(&self.half_width).all(|v| v.is_finite());
        if !finite || !self.amplitude.is_finite() {
            return Err(Error::NonFinite);
        }
        if self.half_width.iter().any(|w| *w <= 0.0) || self.half_width[0] >= PI {
            return Err(Error::InvalidParameter(format!("half widths {:?}", self.half_width)));
        }
        if self.amplitude < 0.0 {
            return Err(Error::InvalidParameter("negative amplitude".into()));
        }
        Ok(())
    }

    pub fn eval_coords(&self, theta: f64, s: f64, u: f64) -> f64 {
        let [t0, s0, u0] = self.center;
        let [wt, ws, wu] = self.half_width;
        let a = psi(wrap_angle(theta - t0) / wt);
        if a == 0.0 {
            return 0.0;
        }
        let b = psi((s - s0) / ws);
        if b == 0.0 {
            return 0.0;
        }
        self.amplitude * a * b * psi((u - u0) / wu)
    }

    pub fn eval(&self, g: &GroupElement) -> f64 {
        let [theta, s, u] = iwasawa(g);
        self.eval_coords(theta, s, u)
    }

    pub(crate) fn eval_entries(&self, g: Entries) -> f64 {
        let [theta, s, u] = coords_of_entries(g);
        self.eval_coords(theta, s, u)
    }

    pub fn support_box(&self) -> IwasawaBox {
        let lo = [0, 1, 2].map(|a| self.center[a] - self.half_width[a]);
        let hi = [0, 1, 2].map(|a| self.center[a] + self.half_width[a]);
        IwasawaBox { lo, hi }
    }

    /// Checks `|tr g| ∉ [2-δ, 2+δ]` on a `per_axis³` grid of the closed
    /// support box, and that the support is of one conjugacy type.
    pub fn certify(&self, delta: f64, per_axis: usize) -> Result<Certificate> {
        if delta <= 0.0 {
            return Err(Error::InvalidParameter("certification delta must be positive".into()));
        }
        let mut kind = None;
        let mut min_gap = f64::INFINITY;
        let mut count = 0;
        for [theta, s, u] in self.support_box().grid_points(per_axis) {
            let trace = trace_from_iwasawa(theta, s, u);
            let gap = (trace.abs() - 2.0).abs();
            let here = if trace.abs() < 2.0 {
                SupportKind::Elliptic
            } else {
                SupportKind::Hyperbolic
            };
            if gap <= delta || kind.is_some_and(|k| k != here) {
                return Err(Error::Certification { theta, s, u, trace });
            }
            kind = Some(here);
            min_gap = min_gap.min(gap);
            count += 1;
        }
        Ok(Certificate {
            delta,
            min_gap,
            kind: kind.expect("non-empty grid"),
            grid_points: count,
        })
    }
}

/// Candidate Haar density `e^{-κ s} dθ ds du`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HaarDensity {
    pub kappa: f64,
}

impl HaarDensity {
    pub const VALIDATED: Self = Self { kappa: -1.0 };

    pub fn at(&self, s: f64) -> f64 {
        (-self.kappa * s).exp()
    }
}

/// A tensor Gauss–Legendre grid on a box in `(θ, s, u)` carrying a Haar
/// density.
#[derive(Clone, Debug, Serialize)]
pub struct QuadratureGrid {
    pub axes: [Axis; 3],
    pub density: HaarDensity,
    pub estimated_error: f64,
    pub validated: bool,
}

impl QuadratureGrid {
    pub fn on_box(b: &IwasawaBox, panels: usize, density: HaarDensity) -> Self {
        Self::on_box_with_panels(b, [panels; 3], density)
    }

    pub fn on_box_with_panels(b: &IwasawaBox, panels: [usize; 3], density: HaarDensity) -> Self {
        let axes = [0, 1, 2].map(|a| Axis::panels(b.lo[a], b.hi[a], panels[a], PANEL_ORDER));
        Self {
            axes,
            density,
            estimated_error: f64::NAN,
            validated: false,
        }
    }

    pub fn support(&self) -> IwasawaBox {
        IwasawaBox {
            lo: [0, 1, 2].map(|a| self.axes[a].lo),
            hi: [0, 1, 2].map(|a| self.axes[a].hi),
        }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `∫ F(g) dg` over the grid; `F` receives the group element and its
    /// coordinates.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&GroupElement, [f64; 3]) -> f64 + Sync,
    {
        let density = self.density;
        integrate_3d([&self.axes[0], &self.axes[1], &self.axes[2]], |theta, s, u| {
            let g = from_iwasawa(theta, s, u);
            f(&g, [theta, s, u]) * density.at(s)
        })
    }

    /// `∫ F dg` for `F` given in coordinates only.
    pub fn integrate_coords<F>(&self, f: F) -> f64
    where
        F: Fn([f64; 3]) -> f64 + Sync,
    {
        let density = self.density;
        integrate_3d([&self.axes[0], &self.axes[1], &self.axes[2]], |theta, s, u| {
            f([theta, s, u]) * density.at(s)
        })
    }

    /// Nodes with their full weights (density included) as CSV.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,s,u,weight\n");
        let [a0, a1, a2] = &self.axes;
        for (t, wt) in a0.nodes.iter().zip(&a0.weights) {
            for (s, ws) in a1.nodes.iter().zip(&a1.weights) {
                for (u, wu) in a2.nodes.iter().zip(&a2.weights) {
                    let w = wt * ws * wu * self.density.at(*s);
                    writeln!(out, "{t:.17e},{s:.17e},{u:.17e},{w:.17e}").expect("string write");
                }
            }
        }
        out
    }
}

/// Box containing the support of `g ↦ F(h g)`, given a box containing the
/// support of `F`. The faces are checked to carry no mass of `F(h ·)`.
pub fn translated_support<F>(support: &IwasawaBox, h: &GroupElement, f: F) -> Result<IwasawaBox>
where
    F: Fn(&GroupElement) -> f64,
{
    let h_inv = h.inverse();
    let image = |p: [f64; 3]| iwasawa(&(&h_inv * &from_iwasawa(p[0], p[1], p[2])));
    let centre = [0, 1, 2].map(|a| 0.5 * (support.lo[a] + support.hi[a]));
    let points = std::iter::once(image(centre)).chain(support.grid_points(9).map(image));
    let tight = bounding_box(points).expect("non-empty sample");
    let mut factor = 0.1;
    for _ in 0..6 {
        let candidate = tight.widened(factor);
        let leak = candidate
            .face_points(13)
            .into_iter()
            .map(|p| f(&(h * &from_iwasawa(p[0], p[1], p[2]))).abs())
            .fold(0.0, f64::max);
        if leak == 0.0 {
            return Ok(candidate);
        }
        factor *= 2.0;
    }
    Err(Error::DensitySupport(factor))
}

/// Relative left-invariance defect `|∫F(hg) - ∫F(g)| / ∫F` of `density`.
/// `panels` applies to `supp F`; the translated box keeps the same panel
/// width on every axis.
pub fn invariance_defect(f: &GroupTestFunction, h: &GroupElement, panels: usize, density: HaarDensity) -> Result<f64> {
    let support = f.support_box();
    let base = QuadratureGrid::on_box(&support, panels, density).integrate_coords(|[t, s, u]| f.eval_coords(t, s, u));
    let moved_box = translated_support(&support, h, |g| f.eval(g))?;
    let moved_panels = [0, 1, 2].map(|a| {
        let ratio = (moved_box.hi[a] - moved_box.lo[a]) / (support.hi[a] - support.lo[a]);
        ((panels as f64 * ratio).ceil() as usize).max(panels)
    });
    let h = entries_of(h);
    let moved = QuadratureGrid::on_box_with_panels(&moved_box, moved_panels, density).integrate_coords(|[t, s, u]| {
        let [t, s, u] = translated_coords(h, t, s, u);
        f.eval_coords(t, s, u)
    });
    Ok((moved - base).abs() / base.abs())
}

fn validation_translates() -> [GroupElement; 2] {
    [from_iwasawa(0.7, 0.5, -0.4), from_iwasawa(-2.1, -0.8, 1.1)]
}

/// Grid on `supp f` with `panels` panels per axis, after validating the
/// density by left-invariance on two fixed translates of `f` itself.
pub fn haar_quadrature_with_density(
    f: &GroupTestFunction,
    panels: usize,
    density: HaarDensity,
) -> Result<QuadratureGrid> {
    f.validate()?;
    if panels == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    for h in validation_translates() {
        let defect = invariance_defect(f, &h, panels, density)?;
        if defect.is_nan() || defect > INVARIANCE_TOL {
            return Err(Error::InvarianceValidation(defect));
        }
    }
    let mut grid = QuadratureGrid::on_box(&f.support_box(), panels, density);
    let coarse = QuadratureGrid::on_box(&f.support_box(), panels.div_ceil(2), density)
        .integrate_coords(|[t, s, u]| f.eval_coords(t, s, u));
    let fine = grid.integrate_coords(|[t, s, u]| f.eval_coords(t, s, u));
    grid.estimated_error = (fine - coarse).abs();
    grid.validated = true;
    Ok(grid)
}

pub fn haar_quadrature(f: &GroupTestFunction, panels: usize) -> Result<QuadratureGrid> {
    haar_quadrature_with_density(f, panels, HaarDensity::VALIDATED)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump() -> GroupTestFunction {
        GroupTestFunction::new([0.4, 0.2, -0.3], [0.5, 0.6, 0.5]).unwrap()
    }

    #[test]
    fn scalar_translation_matches_matrix_product() {
        let h = from_iwasawa(-1.3, 0.8, 0.4);
        let entries = entries_of(&h);
        for (t, s, u) in [(0.3, -0.2, 1.1), (2.9, 1.4, -0.7), (-2.0, 0.0, 0.0)] {
            let by_matrix = iwasawa(&(&h * &from_iwasawa(t, s, u)));
            let by_scalars = translated_coords(entries, t, s, u);
            for a in 0..3 {
                assert!((by_matrix[a] - by_scalars[a]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn iwasawa_round_trip() {
        for &(t, s, u) in &[(0.3, -1.2, 0.7), (-2.9, 0.4, -1.5), (PI, 2.0, 0.0)] {
            let g = from_iwasawa(t, s, u);
            assert!((g.as_mat().determinant() - 1.0).abs() < 1e-12);
            let product = &(&k_theta(t) * &a_s(s)) * &n_u(u);
            assert!(g.distance(&product) < 1e-12);
            let [t2, s2, u2] = iwasawa(&g);
            assert!(wrap_angle(t2 - t).abs() < 1e-12 && (s2 - s).abs() < 1e-12 && (u2 - u).abs() < 1e-12);
            assert!((g.trace() - trace_from_iwasawa(t, s, u)).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_mass_where_density_is_constant_in_s() {
        let f = GroupTestFunction::new([0.0, 0.0, 0.0], [0.5, 0.5, 0.5]).unwrap();
        let one_d = Axis::panels(-1.0, 1.0, 8, PANEL_ORDER).integrate(psi);
        let grid = QuadratureGrid::on_box(&f.support_box(), 8, HaarDensity { kappa: 0.0 });
        let total = grid.integrate(|g, _| f.eval(g));
        assert!((total - one_d.powi(3) * 0.125).abs() < 1e-12);
    }

    #[test]
    fn validated_density_is_left_invariant() {
        let f = bump();
        for h in validation_translates() {
            let defect = invariance_defect(&f, &h, DEFAULT_PANELS, HaarDensity::VALIDATED).unwrap();
            assert!(defect < INVARIANCE_TOL, "{defect}");
        }
    }

    #[test]
    fn wrong_densities_fail_validation() {
        for kappa in [1.0, 0.0, -2.0] {
            let err = haar_quadrature_with_density(&bump(), 6, HaarDensity { kappa }).unwrap_err();
            assert!(matches!(err, Error::InvarianceValidation(_)));
        }
    }

    #[test]
    fn refinement_is_converged() {
        let f = bump();
        let a = QuadratureGrid::on_box(&f.support_box(), DEFAULT_PANELS, HaarDensity::VALIDATED)
            .integrate(|g, _| f.eval(g));
        let b = QuadratureGrid::on_box(&f.support_box(), 2 * DEFAULT_PANELS, HaarDensity::VALIDATED)
            .integrate(|g, _| f.eval(g));
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn certification() {
        let elliptic = GroupTestFunction::new([PI / 2.0, 0.0, 0.0], [0.3, 0.3, 0.3]).unwrap();
        let cert = elliptic.certify(0.1, 11).unwrap();
        assert_eq!(cert.kind, SupportKind::Elliptic);
        let hyperbolic = GroupTestFunction::new([0.0, 2.0, 0.0], [0.3, 0.5, 0.3]).unwrap();
        assert_eq!(hyperbolic.certify(0.1, 11).unwrap().kind, SupportKind::Hyperbolic);
        let straddling = GroupTestFunction::new([0.0, 0.0, 0.0], [0.3, 0.3, 0.3]).unwrap();
        assert!(matches!(straddling.certify(0.1, 11), Err(Error::Certification { .. })));
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let grid = QuadratureGrid::on_box(&bump().support_box(), 1, HaarDensity::VALIDATED);
        assert_eq!(grid.to_csv().lines().count(), 1 + grid.len());
    }
}
