//! Both sides of the character formula for `π(g)φ(x) = φ(g⁻¹x)` on the
//! sphere model.
//!
//! The kernel of `π(f)` with respect to `dμ = dn dt / t²` is
//! `K(x, y) = ∫_K f(g_x k g_y⁻¹) dk` for `x, y` in the same open orbit, and
//! its diagonal `k_f(x) = K(x, x)` gives
//! `Tr_s π(f) = Σ_orbits ∫ w_s(x) k_f(x) dμ(x)` with the chart weight
//! `w_s = Σ_γ α_γ |t_γ|^{s+1}`. The fixed-point side integrates
//! `f(g) Σ_{x ∈ Fix(g)} w_s(x) / |det(1 - dΦ_{g⁻¹}(x))|` against Haar measure.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_part::MeromorphicValue;
use crate::haar::{
    entries_of, inv2, iwasawa_entries, mul2, rotation_entries, wrap_angle, Certificate, Entries, GroupTestFunction,
    QuadratureGrid, PANEL_ORDER,
};
use crate::matrix::GroupElement;
use crate::quadrature::{integrate_3d, Axis};
use crate::sphere::{self, base_section_nt, ChartAtlas, Conjugacy, Orbit, SpherePoint};

/// Gap `δ` used when certifying `supp f ⊂ G(X̃)`.
pub const CERT_DELTA: f64 = 0.05;
/// Grid points per axis used when certifying.
pub const CERT_GRID: usize = 21;
/// Grid points per axis when sampling `supp f` to locate orbit-side supports.
const SUPPORT_SAMPLES: usize = 13;

/// Box in `(n, |t|, φ)` on an open orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrbitBox {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl OrbitBox {
    fn from_samples(samples: &[[f64; 3]]) -> Option<Self> {
        let first = samples.first()?;
        let reference = first[2];
        let mut lo = *first;
        let mut hi = *first;
        for p in samples {
            let q = [p[0], p[1], reference + wrap_angle(p[2] - reference)];
            for a in 0..3 {
                lo[a] = lo[a].min(q[a]);
                hi[a] = hi[a].max(q[a]);
            }
        }
        Some(Self { lo, hi })
    }

    fn widened(&self, factor: f64) -> Self {
        let mut out = *self;
        for a in 0..3 {
            let pad = factor * (self.hi[a] - self.lo[a]).max(1e-3);
            out.lo[a] -= pad;
            out.hi[a] += pad;
        }
        out.lo[1] = out.lo[1].max(0.5 * self.lo[1]);
        if out.hi[2] - out.lo[2] > 2.0 * PI {
            let mid = 0.5 * (out.lo[2] + out.hi[2]);
            out.lo[2] = mid - PI;
            out.hi[2] = mid + PI;
        }
        out
    }

    fn face_points(&self, per_axis: usize) -> Vec<[f64; 3]> {
        let full_circle = self.hi[2] - self.lo[2] >= 2.0 * PI - 1e-12;
        let at = |a: usize, i: usize| self.lo[a] + (self.hi[a] - self.lo[a]) * i as f64 / (per_axis - 1) as f64;
        let mut out = Vec::new();
        for i in 0..per_axis {
            for j in 0..per_axis {
                for k in 0..per_axis {
                    let idx = [i, j, k];
                    let on_face = (0..3).any(|a| (idx[a] == 0 || idx[a] == per_axis - 1) && !(a == 2 && full_circle));
                    if on_face {
                        out.push([at(0, i), at(1, j), at(2, k)]);
                    }
                }
            }
        }
        out
    }

    pub fn axes(&self, panels: usize) -> [Axis; 3] {
        [0, 1, 2].map(|a| Axis::panels(self.lo[a], self.hi[a], panels, PANEL_ORDER))
    }
}

/// Widens `tight` until `integrand` vanishes on every face.
fn clear_box<F: Fn([f64; 3]) -> f64>(tight: OrbitBox, integrand: F) -> Result<OrbitBox> {
    let mut factor = 0.1;
    let mut leak = 0.0;
    for _ in 0..6 {
        let candidate = tight.widened(factor);
        leak = candidate
            .face_points(13)
            .into_iter()
            .map(|p| integrand(p).abs())
            .fold(0.0, f64::max);
        if leak == 0.0 {
            return Ok(candidate);
        }
        factor *= 2.0;
    }
    Err(Error::DensitySupport(leak))
}

fn rotation_angle(k: &GroupElement) -> f64 {
    k.get(1, 0).atan2(k.get(0, 0))
}

fn orbit_point(n: f64, t_abs: f64, orbit: Orbit) -> SpherePoint {
    let t = if orbit == Orbit::Lower { -t_abs } else { t_abs };
    SpherePoint::from_z(Complex64::new(n, t))
}

fn open_orbit_coords(x: &SpherePoint) -> Result<(f64, f64, Orbit)> {
    let orbit = x.orbit();
    if orbit == Orbit::Boundary {
        return Err(Error::BoundaryPoint);
    }
    let z = x.z().ok_or(Error::BoundaryPoint)?;
    Ok((z.re, z.im.abs(), orbit))
}

/// `f(g_x k_φ g_y⁻¹)`.
fn kernel_integrand(f: &GroupTestFunction, gx: Entries, phi: f64, gy_inv: Entries) -> f64 {
    f.eval_entries(mul2(mul2(gx, rotation_entries(phi)), gy_inv))
}

fn section(n: f64, t: f64) -> Entries {
    entries_of(&base_section_nt(n, t))
}

fn full_circle(panels: usize) -> Axis {
    Axis::panels(-PI, PI, 4 * panels, PANEL_ORDER)
}

/// `K(x, y) = ∫_K f(g_x k g_y⁻¹) dk`, zero across different orbits.
pub fn kernel(f: &GroupTestFunction, x: &SpherePoint, y: &SpherePoint, panels: usize) -> Result<f64> {
    let (nx, tx, ox) = open_orbit_coords(x)?;
    let (ny, ty, oy) = open_orbit_coords(y)?;
    if ox != oy {
        return Ok(0.0);
    }
    let gx = section(nx, tx);
    let gy_inv = inv2(section(ny, ty));
    Ok(full_circle(panels).integrate(|phi| kernel_integrand(f, gx, phi, gy_inv)))
}

/// `x ↦ k_f(x) = ∫_K f(g_x k g_x⁻¹) dk` on the open orbits.
#[derive(Clone, Debug)]
pub struct DiagonalDensity {
    f: GroupTestFunction,
    support: Option<OrbitBox>,
    panels: usize,
}

impl DiagonalDensity {
    pub fn eval(&self, x: &SpherePoint) -> Result<f64> {
        kernel(&self.f, x, x, self.panels)
    }

    /// Box in `(n, |t|, φ)` outside of which `f(g_x k_φ g_x⁻¹)` vanishes;
    /// `None` when `supp f` has no elliptic element.
    pub fn support(&self) -> Option<OrbitBox> {
        self.support
    }
}

/// Locates where `k_f` lives: every element of `supp f` that fixes a point
/// of the upper orbit contributes that point and its rotation angle.
pub fn diagonal_density(f: &GroupTestFunction, panels: usize) -> Result<DiagonalDensity> {
    f.validate()?;
    let mut samples = Vec::new();
    for [theta, s, u] in f.support_box().grid_points(SUPPORT_SAMPLES) {
        let g = crate::haar::from_iwasawa(theta, s, u);
        if !matches!(sphere::classify(&g), Ok(Conjugacy::Elliptic)) {
            continue;
        }
        let fixed = sphere::fixed_points_on_sphere(&g)?
            .into_iter()
            .find(|p| p.orbit == Orbit::Upper)
            .expect("elliptic elements fix an upper point");
        let (n, t, _) = open_orbit_coords(&fixed.point)?;
        let gx = base_section_nt(n, t);
        let k = g.conjugate_by(&gx);
        samples.push([n, t, rotation_angle(&k)]);
    }
    let support = match OrbitBox::from_samples(&samples) {
        None => None,
        Some(tight) => Some(clear_box(tight, |[n, t, phi]| {
            let gx = section(n, t);
            kernel_integrand(f, gx, phi, inv2(gx))
        })?),
    };
    Ok(DiagonalDensity { f: *f, support, panels })
}

/// `π(f)u(x) = ∫_G f(g) u(g⁻¹x) dg` on a validated grid.
pub fn apply_pi_f<U>(grid: &QuadratureGrid, f: &GroupTestFunction, u: U, x: &SpherePoint) -> Result<f64>
where
    U: Fn(&SpherePoint) -> f64 + Sync,
{
    if !grid.validated {
        return Err(Error::UnvalidatedGrid);
    }
    Ok(grid.integrate_coords(|[theta, s, uu]| {
        let fv = f.eval_coords(theta, s, uu);
        if fv == 0.0 {
            return 0.0;
        }
        fv * u(&sphere::act_entries(inv2(iwasawa_entries(theta, s, uu)), x))
    }))
}

/// `∫ K(x, y) u(y) dμ(y)`, integrating over `y` in the orbit of `x` and the
/// `K` variable.
pub fn kernel_apply<U>(f: &GroupTestFunction, u: U, x: &SpherePoint, panels: usize) -> Result<f64>
where
    U: Fn(&SpherePoint) -> f64 + Sync,
{
    let (nx, tx, orbit) = open_orbit_coords(x)?;
    let gx = base_section_nt(nx, tx);
    let mut samples = Vec::new();
    for [theta, s, uu] in f.support_box().grid_points(SUPPORT_SAMPLES) {
        let g = crate::haar::from_iwasawa(theta, s, uu);
        let y = sphere::act(&g.inverse(), x);
        let (ny, ty, _) = open_orbit_coords(&y)?;
        let gy = base_section_nt(ny, ty);
        let k = &(&gx.inverse() * &g) * &gy;
        samples.push([ny, ty, rotation_angle(&k)]);
    }
    let tight = OrbitBox::from_samples(&samples).expect("non-empty sample");
    let gx_entries = entries_of(&gx);
    let bx = clear_box(tight, |[n, t, phi]| {
        kernel_integrand(f, gx_entries, phi, inv2(section(n, t)))
    })?;
    let [a0, a1, a2] = bx.axes(panels);
    Ok(integrate_3d([&a0, &a1, &a2], |n, t, phi| {
        let kv = kernel_integrand(f, gx_entries, phi, inv2(section(n, t)));
        if kv == 0.0 {
            return 0.0;
        }
        kv * u(&orbit_point(n, t, orbit)) * sphere::mu_density(t)
    }))
}

fn certified(f: &GroupTestFunction) -> Result<Certificate> {
    f.validate()?;
    f.certify(CERT_DELTA, CERT_GRID)
}

/// `Σ_orbits ∫ w_s(x) k_f(x) dμ(x)`; entire in `s` for certified `f`.
pub fn trace_s_direct(
    f: &GroupTestFunction,
    s: Complex64,
    atlas: &ChartAtlas,
    panels: usize,
) -> Result<MeromorphicValue> {
    certified(f)?;
    let density = diagonal_density(f, panels)?;
    let Some(bx) = density.support() else {
        return Ok(MeromorphicValue::regular(s, Complex64::new(0.0, 0.0)));
    };
    let [a0, a1, a2] = bx.axes(panels);
    let part = |orbit: Orbit, imaginary: bool| {
        integrate_3d([&a0, &a1, &a2], |n, t, phi| {
            let gx = section(n, t);
            let kv = kernel_integrand(f, gx, phi, inv2(gx));
            if kv == 0.0 {
                return 0.0;
            }
            let w = atlas.weight(&orbit_point(n, t, orbit), s);
            kv * sphere::mu_density(t) * if imaginary { w.im } else { w.re }
        })
    };
    let mut value = Complex64::new(part(Orbit::Upper, false) + part(Orbit::Lower, false), 0.0);
    if s.im != 0.0 {
        value.im = part(Orbit::Upper, true) + part(Orbit::Lower, true);
    }
    Ok(MeromorphicValue::regular(s, value))
}

/// `Σ_{x ∈ Fix(g)} 1 / |det(1 - dΦ_{g⁻¹}(x))|`.
pub fn transversal_trace_pointwise(g: &GroupElement) -> Result<f64> {
    weighted_fixed_point_sum(g, |_| Ok(1.0))
}

fn weighted_fixed_point_sum<W>(g: &GroupElement, weight: W) -> Result<f64>
where
    W: Fn(&SpherePoint) -> Result<f64>,
{
    let mut total = 0.0;
    for fp in sphere::fixed_points_on_sphere(g)? {
        if !fp.transversal {
            return Err(Error::NonTransversal(fp.det_one_minus_dphi));
        }
        total += weight(&fp.point)? / fp.det_one_minus_dphi;
    }
    Ok(total)
}

fn integrate_over_fixed_points<W>(f: &GroupTestFunction, grid: &QuadratureGrid, weight: W) -> Result<f64>
where
    W: Fn(&SpherePoint) -> Result<f64> + Sync,
{
    certified(f)?;
    if !grid.validated {
        return Err(Error::UnvalidatedGrid);
    }
    let failure: OnceLock<Error> = OnceLock::new();
    let value = grid.integrate(|g, [theta, s, u]| {
        let fv = f.eval_coords(theta, s, u);
        if fv == 0.0 {
            return 0.0;
        }
        match weighted_fixed_point_sum(g, &weight) {
            Ok(sum) => fv * sum,
            Err(e) => {
                let _ = failure.set(e);
                0.0
            }
        }
    });
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// `∫ f(g) Σ_{Fix(g)} w_s(x) / |det(1 - dΦ_{g⁻¹}(x))| dg`; boundary fixed
/// points carry `|t|^{s+1}`, i.e. `1` at `s = -1` and `0` for `s > -1`.
pub fn trace_s_fixed_point(f: &GroupTestFunction, s: f64, atlas: &ChartAtlas, grid: &QuadratureGrid) -> Result<f64> {
    integrate_over_fixed_points(f, grid, |p| atlas.weight_real(p, s))
}

/// `∫ f(g) Tr♭π(g) dg`.
pub fn trace_reg(f: &GroupTestFunction, grid: &QuadratureGrid) -> Result<f64> {
    integrate_over_fixed_points(f, grid, |_| Ok(1.0))
}

/// `|x - y| / |x|`, with `0/0 = 0`.
pub fn relative_error(reference: f64, other: f64) -> f64 {
    let diff = (reference - other).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / reference.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{from_iwasawa, haar_quadrature, psi, DEFAULT_PANELS};
    use crate::quadrature::integrate_2d;

    fn rotation(phi: f64) -> GroupElement {
        crate::haar::k_theta(phi)
    }

    fn elliptic() -> GroupTestFunction {
        GroupTestFunction::new([PI / 2.0, 0.0, 0.0], [0.3, 0.3, 0.3]).unwrap()
    }

    fn hyperbolic() -> GroupTestFunction {
        GroupTestFunction::new([0.0, 2.0, 0.0], [0.3, 0.5, 0.3]).unwrap()
    }

    #[test]
    fn k_f_at_base_point_is_a_k_integral() {
        let f = elliptic();
        let density = diagonal_density(&f, 12).unwrap();
        let i = SpherePoint::from_z(Complex64::new(0.0, 1.0));
        let direct = full_circle(12).integrate(|phi| f.eval(&rotation(phi)));
        assert!((density.eval(&i).unwrap() - direct).abs() < 1e-14);
        assert!(direct > 0.0);
    }

    #[test]
    fn k_f_is_conjugation_equivariant() {
        let f = elliptic();
        let g0 = from_iwasawa(0.3, 0.2, -0.1);
        let x = SpherePoint::from_z(Complex64::new(0.1, 1.2));
        let (n, t, _) = open_orbit_coords(&x).unwrap();
        let gx = base_section_nt(n, t);
        let moved = kernel(&f, &sphere::act(&g0, &x), &sphere::act(&g0, &x), 12).unwrap();
        let conj = full_circle(12).integrate(|phi| {
            let inner = &(&gx * &rotation(phi)) * &gx.inverse();
            f.eval(&(&(&g0 * &inner) * &g0.inverse()))
        });
        assert!((moved - conj).abs() < 1e-8);
    }

    #[test]
    fn hyperbolic_support_has_no_diagonal_density() {
        let f = hyperbolic();
        let density = diagonal_density(&f, 12).unwrap();
        assert!(density.support().is_none());
        for (n, t) in [(0.0, 1.0), (0.5, 0.1), (-2.0, 3.0), (0.0, 1e-3)] {
            let x = SpherePoint::from_z(Complex64::new(n, t));
            assert!(density.eval(&x).unwrap().abs() <= 1e-10);
        }
    }

    #[test]
    fn k_f_vanishes_towards_the_boundary() {
        let density = diagonal_density(&elliptic(), 12).unwrap();
        for t in [1e-1, 1e-2, 1e-4, 1e-8] {
            let x = SpherePoint::from_z(Complex64::new(0.3, t));
            assert_eq!(density.eval(&x).unwrap(), 0.0);
        }
    }

    #[test]
    fn pointwise_transversal_trace() {
        let theta: f64 = 0.9;
        let value = transversal_trace_pointwise(&rotation(theta)).unwrap();
        assert!((value - 1.0 / (2.0 * theta.sin().powi(2))).abs() < 1e-12);
        let lambda: f64 = 1.8;
        let g = GroupElement::diagonal(&[lambda, 1.0 / lambda]).unwrap();
        let expected = (1.0 - lambda * lambda).powi(-2) + (1.0 - lambda.powi(-2)).powi(-2);
        assert!((transversal_trace_pointwise(&g).unwrap() - expected).abs() < 1e-12);
        let u = GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(transversal_trace_pointwise(&u), Err(Error::NonTransversal(_))));
    }

    #[test]
    fn apply_pi_f_of_constant_is_total_mass() {
        let f = elliptic();
        let grid = haar_quadrature(&f, DEFAULT_PANELS).unwrap();
        let mass = grid.integrate(|g, _| f.eval(g));
        for z in [Complex64::new(0.0, 1.0), Complex64::new(3.0, -0.2)] {
            let v = apply_pi_f(&grid, &f, |_| 1.0, &SpherePoint::from_z(z)).unwrap();
            assert!((v - mass).abs() < 1e-14 * mass);
        }
        let raw = crate::haar::QuadratureGrid::on_box(&f.support_box(), 4, crate::haar::HaarDensity::VALIDATED);
        assert!(matches!(
            apply_pi_f(&raw, &f, |_| 1.0, &SpherePoint::infinity()),
            Err(Error::UnvalidatedGrid)
        ));
    }

    #[test]
    fn direct_side_is_linear_and_fixed_point_side_rejects_straddling_support() {
        let f = elliptic();
        let atlas = ChartAtlas::default();
        let a = trace_s_direct(&f, Complex64::new(0.0, 0.0), &atlas, 8)
            .unwrap()
            .value
            .re;
        let b = trace_s_direct(&f.scaled(2.5), Complex64::new(0.0, 0.0), &atlas, 8)
            .unwrap()
            .value
            .re;
        assert!((b - 2.5 * a).abs() < 1e-13 * b);
        let straddling = GroupTestFunction::new([0.0, 0.0, 0.0], [0.3, 0.3, 0.3]).unwrap();
        assert!(matches!(
            trace_s_direct(&straddling, Complex64::new(0.0, 0.0), &atlas, 8),
            Err(Error::Certification { .. })
        ));
    }

    #[test]
    fn mu_is_invariant() {
        // F(x) = ψ(|x - c| / r) on the upper half-plane
        let c = Complex64::new(0.4, 1.5);
        let r = 0.8;
        let bump = |z: Complex64| psi((z - c).norm() / r);
        let integrate = |g: &GroupElement| {
            let pts: Vec<Complex64> = (0..64)
                .map(|k| {
                    let a = 2.0 * PI * k as f64 / 64.0;
                    let z = c + Complex64::from_polar(r, a);
                    sphere::act(&g.inverse(), &SpherePoint::from_z(z)).z().unwrap()
                })
                .collect();
            let (mut lo, mut hi) = (pts[0], pts[0]);
            for p in &pts {
                lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
                hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
            }
            let pad = 0.1 * (hi - lo);
            let ax = Axis::panels(lo.re - pad.re, hi.re + pad.re, 24, PANEL_ORDER);
            let ay = Axis::panels(lo.im - pad.im, hi.im + pad.im, 24, PANEL_ORDER);
            integrate_2d([&ax, &ay], |n, t| {
                let x = SpherePoint::from_z(Complex64::new(n, t));
                bump(sphere::act(g, &x).z().unwrap()) * sphere::mu_density(t)
            })
        };
        let base = integrate(&GroupElement::identity(2));
        for g in [from_iwasawa(0.4, 0.6, -0.3), from_iwasawa(2.0, -0.5, 0.8)] {
            assert!((integrate(&g) - base).abs() < 1e-8 * base);
        }
    }
}
