//! The compactification of `SL(2,R)/SO(2)` realized as the Riemann sphere.
//!
//! `SL(2,R)` acts by real Möbius maps. The two open orbits are the upper
//! and lower half-planes (base points `±i`, both with isotropy `SO(2)`);
//! the boundary orbit is `R ∪ {∞}`. Charts are `z` (where `z₂ ≠ 0`) and
//! `w = 1/z` (where `z₁ ≠ 0`), each with coordinates `(n, t) = (Re, Im)`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::GroupElement;

/// `|t|` at or below this is on the boundary orbit.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// `|tr² - 4|` at or below this is parabolic.
pub const PARABOLIC_TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq)]
pub struct SpherePoint {
    z1: Complex64,
    z2: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orbit {
    Upper,
    Lower,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Z,
    W,
}

impl SpherePoint {
    pub fn new(z1: Complex64, z2: Complex64) -> Result<Self> {
        let norm = (z1.norm_sqr() + z2.norm_sqr()).sqrt();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm == 0.0 {
            return Err(Error::InvalidParameter("both homogeneous coordinates vanish".into()));
        }
        let lead = if z1 != Complex64::new(0.0, 0.0) { z1 } else { z2 };
        let phase = lead.conj() / lead.norm();
        Ok(Self {
            z1: z1 * phase / norm,
            z2: z2 * phase / norm,
        })
    }

    pub fn from_z(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0)).expect("finite affine point")
    }

    pub fn from_chart(chart: Chart, n: f64, t: f64) -> Self {
        let c = Complex64::new(n, t);
        let one = Complex64::new(1.0, 0.0);
        match chart {
            Chart::Z => Self::new(c, one),
            Chart::W => Self::new(one, c),
        }
        .expect("finite chart point")
    }

    pub fn infinity() -> Self {
        Self {
            z1: Complex64::new(1.0, 0.0),
            z2: Complex64::new(0.0, 0.0),
        }
    }

    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        (self.z1, self.z2)
    }

    /// Affine coordinate, `None` at `∞`.
    pub fn z(&self) -> Option<Complex64> {
        (self.z2.norm() > 0.0).then(|| self.z1 / self.z2)
    }

    /// The chart in which the point is best conditioned (`|coordinate| ≤ 1`).
    pub fn owning_chart(&self) -> Chart {
        if self.z2.norm() >= self.z1.norm() {
            Chart::Z
        } else {
            Chart::W
        }
    }

    pub fn coordinate(&self, chart: Chart) -> Result<Complex64> {
        let (num, den) = match chart {
            Chart::Z => (self.z1, self.z2),
            Chart::W => (self.z2, self.z1),
        };
        if den.norm() == 0.0 {
            return Err(Error::ChartDomain);
        }
        Ok(num / den)
    }

    /// Chart coordinates `(n, t)`.
    pub fn chart_coordinates(&self, chart: Chart) -> Result<(f64, f64)> {
        let c = self.coordinate(chart)?;
        Ok((c.re, c.im))
    }

    pub fn orbit(&self) -> Orbit {
        let chart = self.owning_chart();
        let t = self.chart_coordinates(chart).expect("owning chart").1;
        if t.abs() <= BOUNDARY_TOL {
            return Orbit::Boundary;
        }
        // Im(1/z) = -Im z / |z|²
        let upper = match chart {
            Chart::Z => t > 0.0,
            Chart::W => t < 0.0,
        };
        if upper {
            Orbit::Upper
        } else {
            Orbit::Lower
        }
    }

    /// Distance in the chordal metric of the unit-normalized lift.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let cross = self.z1 * other.z2 - self.z2 * other.z1;
        cross.norm()
    }
}

impl fmt::Debug for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.z() {
            Some(z) if self.owning_chart() == Chart::Z || z.norm() < 1e12 => write!(f, "SpherePoint({z})"),
            _ => write!(f, "SpherePoint(∞)"),
        }
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.owning_chart() {
            Chart::Z => {
                let z = self.z().expect("z-chart point");
                [z.re, z.im].serialize(s)
            }
            Chart::W => {
                let w = self.coordinate(Chart::W).expect("w-chart point");
                if w.norm() == 0.0 {
                    s.serialize_str("inf")
                } else {
                    let z = w.inv();
                    [z.re, z.im].serialize(s)
                }
            }
        }
    }
}

fn entries(g: &GroupElement) -> Result<(f64, f64, f64, f64)> {
    if g.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: g.dim(),
        });
    }
    Ok((g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)))
}

/// `g·[z₁ : z₂] = [a z₁ + b z₂ : c z₁ + d z₂]`.
pub fn act(g: &GroupElement, p: &SpherePoint) -> SpherePoint {
    let (a, b, c, d) = entries(g).expect("SL(2,R) element");
    act_entries([a, b, c, d], p)
}

pub(crate) fn act_entries([a, b, c, d]: [f64; 4], p: &SpherePoint) -> SpherePoint {
    SpherePoint::new(p.z1 * a + p.z2 * b, p.z1 * c + p.z2 * d).expect("invertible action")
}

pub fn orbit_label(p: &SpherePoint) -> Orbit {
    p.orbit()
}

/// `t(g·x) / t(x)` in `chart`; analytic across `t = 0`.
pub fn chi(g: &GroupElement, p: &SpherePoint, chart: Chart) -> Result<f64> {
    let (a, b, c, d) = entries(g)?;
    let q = p.coordinate(chart)?;
    let den = match chart {
        Chart::Z => q * c + d,
        Chart::W => q * b + a,
    };
    let image = act(g, p);
    if image.coordinate(chart).is_err() {
        return Err(Error::ChartDomain);
    }
    Ok(1.0 / den.norm_sqr())
}

/// Smooth partition of unity `α₁ + α₂ = 1`: `α₁` is `1` on `|z| ≤ r₁` and
/// vanishes for `|z| ≥ r₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChartAtlas {
    pub r1: f64,
    pub r2: f64,
}

impl Default for ChartAtlas {
    fn default() -> Self {
        Self { r1: 0.5, r2: 2.0 }
    }
}

fn smooth_step(u: f64) -> f64 {
    let e = |v: f64| if v > 0.0 { (-1.0 / v).exp() } else { 0.0 };
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        e(u) / (e(u) + e(1.0 - u))
    }
}

impl ChartAtlas {
    pub fn new(r1: f64, r2: f64) -> Result<Self> {
        if !(r1 > 0.0 && r2 > r1 && r2.is_finite()) {
            return Err(Error::InvalidParameter(format!("atlas radii ({r1}, {r2})")));
        }
        Ok(Self { r1, r2 })
    }

    fn modulus(p: &SpherePoint) -> f64 {
        let (z1, z2) = p.homogeneous();
        if z2.norm() == 0.0 {
            f64::INFINITY
        } else {
            z1.norm() / z2.norm()
        }
    }

    pub fn alpha(&self, chart: Chart, p: &SpherePoint) -> f64 {
        let rho = Self::modulus(p);
        let a1 = if rho.is_finite() {
            smooth_step((self.r2 - rho) / (self.r2 - self.r1))
        } else {
            0.0
        };
        match chart {
            Chart::Z => a1,
            Chart::W => 1.0 - a1,
        }
    }

    /// `Σ_γ α_γ(x) |t_γ(x)|^{s+1}` at an open-orbit point.
    pub fn weight(&self, p: &SpherePoint, s: Complex64) -> Complex64 {
        [Chart::Z, Chart::W]
            .into_iter()
            .map(|chart| {
                let alpha = self.alpha(chart, p);
                if alpha == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let t = p.chart_coordinates(chart).expect("α supported in chart").1.abs();
                Complex64::new(t, 0.0).powc(s + 1.0) * alpha
            })
            .sum()
    }

    /// Real-`s` weight valid on the whole sphere: on the boundary `|t|^{s+1}`
    /// is `1` at `s = -1`, `0` for `s > -1`, and undefined below.
    pub fn weight_real(&self, p: &SpherePoint, s: f64) -> Result<f64> {
        if p.orbit() != Orbit::Boundary {
            return Ok(self.weight(p, Complex64::new(s, 0.0)).re);
        }
        if s == -1.0 {
            Ok(1.0)
        } else if s > -1.0 {
            Ok(0.0)
        } else {
            Err(Error::OutsideRegime(s))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conjugacy {
    Hyperbolic,
    Elliptic,
    Parabolic,
}

fn is_central(g: &GroupElement) -> Result<bool> {
    let (a, b, c, d) = entries(g)?;
    Ok(b.abs() <= PARABOLIC_TOL && c.abs() <= PARABOLIC_TOL && (a - d).abs() <= PARABOLIC_TOL)
}

pub fn classify(g: &GroupElement) -> Result<Conjugacy> {
    if is_central(g)? {
        return Err(Error::CentralElement);
    }
    let disc = g.trace() * g.trace() - 4.0;
    Ok(if disc.abs() <= PARABOLIC_TOL {
        Conjugacy::Parabolic
    } else if disc > 0.0 {
        Conjugacy::Hyperbolic
    } else {
        Conjugacy::Elliptic
    })
}

/// `g ∈ G(X̃)`: every fixed point is simple.
pub fn transversal_class(g: &GroupElement) -> bool {
    match fixed_points_on_sphere(g) {
        Ok(points) => points.iter().all(|p| p.transversal),
        Err(_) => false,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SphereFixedPoint {
    #[serde(rename = "z")]
    pub point: SpherePoint,
    pub orbit: Orbit,
    pub chart: Chart,
    #[serde(skip)]
    pub multiplier: Complex64,
    #[serde(rename = "det_1_minus_dphi")]
    pub det_one_minus_dphi: f64,
    pub transversal: bool,
}

/// Roots of `c z₁² + (d − a) z₁ z₂ − b z₂² = 0`, the eigenlines of `g`.
fn fixed_lines(g: &GroupElement) -> Result<Vec<SpherePoint>> {
    let (a, b, c, d) = entries(g)?;
    let kind = classify(g)?;
    let half_tr = 0.5 * (a + d);
    let root = Complex64::new(half_tr * half_tr - 1.0, 0.0).sqrt();
    let mus: Vec<Complex64> = match kind {
        Conjugacy::Parabolic => vec![Complex64::new(half_tr, 0.0)],
        _ => vec![root + half_tr, -root + half_tr],
    };
    mus.into_iter()
        .map(|mu| {
            // null vector of g - μ from whichever row is larger
            let r1 = (Complex64::new(a, 0.0) - mu, Complex64::new(b, 0.0));
            let r2 = (Complex64::new(c, 0.0), Complex64::new(d, 0.0) - mu);
            let (u, v) = if r1.0.norm_sqr() + r1.1.norm_sqr() >= r2.0.norm_sqr() + r2.1.norm_sqr() {
                (-r1.1, r1.0)
            } else {
                (r2.1, -r2.0)
            };
            SpherePoint::new(u, v)
        })
        .collect()
}

/// Complex multiplier of `Φ_{g⁻¹}` at a fixed point, from the closed form
/// `(c q + d)^{-2}` (z-chart) or `(b q + a)^{-2}` (w-chart) with
/// `g⁻¹ = (a b; c d)`.
pub fn multiplier(g: &GroupElement, p: &SpherePoint) -> Result<(Chart, Complex64)> {
    let (a, b, c, d) = entries(&g.inverse())?;
    let chart = p.owning_chart();
    let q = p.coordinate(chart)?;
    let den = match chart {
        Chart::Z => q * c + d,
        Chart::W => q * b + a,
    };
    Ok((chart, (den * den).inv()))
}

fn multiplication_matrix(m: Complex64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[m.re, -m.im, m.im, m.re])
}

pub fn fixed_points_on_sphere(g: &GroupElement) -> Result<Vec<SphereFixedPoint>> {
    fixed_lines(g)?
        .into_iter()
        .map(|point| {
            let (chart, m) = multiplier(g, &point)?;
            let det = (Complex64::new(1.0, 0.0) - m).norm_sqr();
            Ok(SphereFixedPoint {
                orbit: point.orbit(),
                chart,
                point,
                multiplier: m,
                det_one_minus_dphi: det,
                transversal: det > crate::fixed_points::TRANSVERSAL_TOL,
            })
        })
        .collect()
}

/// Real Jacobian of `Φ_{g⁻¹}` at a fixed point in its owning chart.
pub fn dphi(g: &GroupElement, fixed: &SphereFixedPoint) -> Result<DMatrix<f64>> {
    let (_, m) = multiplier(g, &fixed.point)?;
    Ok(multiplication_matrix(m))
}

/// Central-difference Jacobian of `Φ_{g⁻¹}` at `p` in its owning chart,
/// with one Richardson step.
pub fn dphi_finite_difference(g: &GroupElement, p: &SpherePoint) -> Result<DMatrix<f64>> {
    let chart = p.owning_chart();
    let (n0, t0) = p.chart_coordinates(chart)?;
    let g_inv = g.inverse();
    let map = |n: f64, t: f64| -> Result<(f64, f64)> {
        act(&g_inv, &SpherePoint::from_chart(chart, n, t)).chart_coordinates(chart)
    };
    let central = |h: f64| -> Result<DMatrix<f64>> {
        let mut jac = DMatrix::zeros(2, 2);
        for (col, (dn, dt)) in [(h, 0.0), (0.0, h)].into_iter().enumerate() {
            let plus = map(n0 + dn, t0 + dt)?;
            let minus = map(n0 - dn, t0 - dt)?;
            jac[(0, col)] = (plus.0 - minus.0) / (2.0 * h);
            jac[(1, col)] = (plus.1 - minus.1) / (2.0 * h);
        }
        Ok(jac)
    };
    let h = 1e-4;
    Ok((central(h / 2.0)? * 4.0 - central(h)?) / 3.0)
}

/// `g_x = (√|t|, n/√|t|; 0, 1/√|t|)`, mapping `±i` (sign of `t`) to `x`.
pub fn base_section(p: &SpherePoint) -> Result<GroupElement> {
    if p.orbit() == Orbit::Boundary {
        return Err(Error::BoundaryPoint);
    }
    let z = p.z().ok_or(Error::BoundaryPoint)?;
    Ok(base_section_nt(z.re, z.im.abs()))
}

pub(crate) fn base_section_nt(n: f64, t_abs: f64) -> GroupElement {
    let r = t_abs.sqrt();
    GroupElement::from_mat_unchecked(DMatrix::from_row_slice(2, 2, &[r, n / r, 0.0, 1.0 / r]))
}

pub fn base_point(orbit: Orbit) -> Result<SpherePoint> {
    match orbit {
        Orbit::Upper => Ok(SpherePoint::from_z(Complex64::new(0.0, 1.0))),
        Orbit::Lower => Ok(SpherePoint::from_z(Complex64::new(0.0, -1.0))),
        Orbit::Boundary => Err(Error::BoundaryPoint),
    }
}

/// Invariant measure density `1/t²` in either chart.
pub fn mu_density(t: f64) -> f64 {
    1.0 / (t * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rotation(theta: f64) -> GroupElement {
        let (s, co) = theta.sin_cos();
        GroupElement::from_rows(&[vec![co, -s], vec![s, co]]).unwrap()
    }

    pub(crate) fn random_sl2(rng: &mut ChaCha8Rng) -> GroupElement {
        loop {
            let a: f64 = rng.gen_range(-2.0..2.0);
            let b: f64 = rng.gen_range(-2.0..2.0);
            let c: f64 = rng.gen_range(-2.0..2.0);
            if a.abs() < 0.2 {
                continue;
            }
            let d = (1.0 + b * c) / a;
            return GroupElement::from_rows(&[vec![a, b], vec![c, d]]).unwrap();
        }
    }

    fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
        SpherePoint::from_z(c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
    }

    #[test]
    fn normalization() {
        let p = SpherePoint::new(c(0.0, 2.0), c(0.0, 2.0)).unwrap();
        let (z1, z2) = p.homogeneous();
        assert!((z1.norm_sqr() + z2.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(z1.im == 0.0 && z1.re > 0.0);
        assert!(SpherePoint::new(c(0.0, 0.0), c(0.0, 0.0)).is_err());
        assert_eq!(
            SpherePoint::new(c(0.0, 0.0), c(0.0, -3.0)).unwrap().z(),
            Some(c(0.0, 0.0))
        );
    }

    #[test]
    fn action_examples() {
        let p = SpherePoint::from_z(c(0.3, -0.7));
        assert!(act(&GroupElement::identity(2), &p).chordal_distance(&p) < 1e-15);
        let g = GroupElement::diagonal(&[2.0, 0.5]).unwrap();
        let zero = SpherePoint::from_z(c(0.0, 0.0));
        assert_eq!(act(&g, &zero), zero);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let g = random_sl2(&mut rng);
            let h = random_sl2(&mut rng);
            let p = random_point(&mut rng);
            assert!(act(&g.inverse(), &act(&g, &p)).chordal_distance(&p) < 1e-12);
            assert!(act(&(&g * &h), &p).chordal_distance(&act(&g, &act(&h, &p))) < 1e-12);
        }
    }

    #[test]
    fn orbit_labels() {
        assert_eq!(orbit_label(&SpherePoint::from_z(c(0.0, 1.0))), Orbit::Upper);
        assert_eq!(orbit_label(&SpherePoint::infinity()), Orbit::Boundary);
        assert_eq!(orbit_label(&SpherePoint::from_z(c(5.0, 0.0))), Orbit::Boundary);
        assert_eq!(orbit_label(&SpherePoint::from_z(c(40.0, -1.0))), Orbit::Lower);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let g = random_sl2(&mut rng);
            let p = random_point(&mut rng);
            assert_eq!(orbit_label(&act(&g, &p)), orbit_label(&p));
        }
    }

    #[test]
    fn chi_examples_and_cocycle() {
        let i = SpherePoint::from_z(c(0.0, 1.0));
        assert_eq!(chi(&GroupElement::identity(2), &i, Chart::Z).unwrap(), 1.0);
        let s: f64 = 0.8;
        let a = GroupElement::diagonal(&[(s / 2.0).exp(), (-s / 2.0).exp()]).unwrap();
        let t_image = act(&a, &i).chart_coordinates(Chart::Z).unwrap().1;
        assert!((chi(&a, &i, Chart::Z).unwrap() - t_image).abs() < 1e-12);
        assert!((t_image - s.exp()).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 100 {
            let g = random_sl2(&mut rng);
            let h = random_sl2(&mut rng);
            let p = random_point(&mut rng);
            for chart in [Chart::Z, Chart::W] {
                let lhs = chi(&(&g * &h), &p, chart);
                let rhs = chi(&g, &act(&h, &p), chart).and_then(|x| Ok(x * chi(&h, &p, chart)?));
                if let (Ok(l), Ok(r)) = (lhs, rhs) {
                    assert!((l - r).abs() <= 1e-10 * l.max(1.0));
                    let t = p.chart_coordinates(chart).unwrap().1;
                    let t_img = act(&g, &p).chart_coordinates(chart);
                    if let Ok((_, ti)) = t_img {
                        let cg = chi(&g, &p, chart).unwrap();
                        assert!((cg * t - ti).abs() <= 1e-10 * (1.0 + ti.abs()));
                    }
                    checked += 1;
                }
            }
        }
    }

    #[test]
    fn chi_is_smooth_across_boundary() {
        let g = GroupElement::from_rows(&[vec![1.3, 0.4], vec![-0.5, 0.6153846153846154]]).unwrap();
        let h = 1e-4;
        let f = |t: f64| chi(&g, &SpherePoint::from_z(c(0.2, t)), Chart::Z).unwrap();
        let second = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let second_wide = (f(2.0 * h) - 2.0 * f(0.0) + f(-2.0 * h)) / (4.0 * h * h);
        assert!(f(0.0) > 0.0);
        assert!((second - second_wide).abs() < 1e-4 * (1.0 + second.abs()));
    }

    #[test]
    fn partition_of_unity() {
        let atlas = ChartAtlas::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let p = SpherePoint::from_z(c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)));
            let sum = atlas.alpha(Chart::Z, &p) + atlas.alpha(Chart::W, &p);
            assert!((sum - 1.0).abs() < 1e-12);
        }
        assert_eq!(atlas.alpha(Chart::Z, &SpherePoint::infinity()), 0.0);
        assert_eq!(atlas.alpha(Chart::W, &SpherePoint::from_z(c(0.1, 0.1))), 0.0);
        let p = SpherePoint::from_z(c(1.0, 0.5));
        assert!((atlas.weight(&p, c(-1.0, 0.0)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn fixed_point_trichotomy_examples() {
        let g = GroupElement::diagonal(&[2.0, 0.5]).unwrap();
        let fps = fixed_points_on_sphere(&g).unwrap();
        assert_eq!(fps.len(), 2);
        assert!(fps.iter().all(|p| p.orbit == Orbit::Boundary && p.transversal));
        let zs: Vec<_> = fps.iter().map(|p| p.point).collect();
        assert!(zs.contains(&SpherePoint::infinity()));
        assert!(zs.contains(&SpherePoint::from_z(c(0.0, 0.0))));

        let theta = 1.1;
        let fps = fixed_points_on_sphere(&rotation(theta)).unwrap();
        let orbits: Vec<_> = fps.iter().map(|p| p.orbit).collect();
        assert!(orbits.contains(&Orbit::Upper) && orbits.contains(&Orbit::Lower));
        for p in &fps {
            assert!((p.point.z().unwrap().im.abs() - 1.0).abs() < 1e-14);
            assert!((p.det_one_minus_dphi - 4.0 * theta.sin().powi(2)).abs() < 1e-12);
        }

        let u = GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let fps = fixed_points_on_sphere(&u).unwrap();
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].point, SpherePoint::infinity());
        assert!(!fps[0].transversal);

        assert!(matches!(
            fixed_points_on_sphere(&GroupElement::identity(2).neg()),
            Err(Error::CentralElement)
        ));
    }

    #[test]
    fn fixed_points_solve_the_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let g = random_sl2(&mut rng);
            let (a, b, cc, d) = entries(&g).unwrap();
            for fp in fixed_points_on_sphere(&g).unwrap() {
                let (z1, z2) = fp.point.homogeneous();
                let residual = z1 * z1 * cc + z1 * z2 * (d - a) - z2 * z2 * b;
                assert!(residual.norm() < 1e-12 * (1.0 + g.as_mat().amax().powi(2)));
                assert!(act(&g, &fp.point).chordal_distance(&fp.point) < 1e-12);
            }
        }
    }

    #[test]
    fn dphi_matches_finite_differences() {
        let lambda: f64 = 1.7;
        let g = GroupElement::diagonal(&[lambda, 1.0 / lambda]).unwrap();
        for fp in fixed_points_on_sphere(&g).unwrap() {
            let expected = if fp.point == SpherePoint::infinity() {
                (1.0 - lambda * lambda).powi(2)
            } else {
                (1.0 - lambda.powi(-2)).powi(2)
            };
            assert!((fp.det_one_minus_dphi - expected).abs() < 1e-12);
            let fd = dphi_finite_difference(&g, &fp.point).unwrap();
            assert!((fd - dphi(&g, &fp).unwrap()).amax() < 1e-6);
        }
        let g = rotation(0.4);
        for fp in fixed_points_on_sphere(&g).unwrap() {
            let fd = dphi_finite_difference(&g, &fp.point).unwrap();
            let closed = dphi(&g, &fp).unwrap();
            assert!((fd - &closed).amax() < 1e-6);
            let inv_fp = fixed_points_on_sphere(&g.inverse())
                .unwrap()
                .into_iter()
                .find(|q| q.point == fp.point)
                .unwrap();
            let product = closed * dphi(&g.inverse(), &inv_fp).unwrap();
            assert!((product - DMatrix::<f64>::identity(2, 2)).amax() < 1e-12);
        }
    }

    #[test]
    fn transversal_class_examples() {
        assert!(transversal_class(&GroupElement::diagonal(&[2.0, 0.5]).unwrap()));
        assert!(!transversal_class(
            &GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
        ));
        assert!(!transversal_class(&GroupElement::identity(2).neg()));
    }

    #[test]
    fn base_section_examples() {
        let i = SpherePoint::from_z(c(0.0, 1.0));
        assert_eq!(base_section(&i).unwrap(), GroupElement::identity(2));
        let x = SpherePoint::from_z(c(3.0, 4.0));
        let gx = base_section(&x).unwrap();
        assert!(act(&gx, &i).chordal_distance(&x) < 1e-12);
        assert_eq!(
            base_section(&SpherePoint::from_z(c(0.0, -1.0))).unwrap(),
            GroupElement::identity(2)
        );
        let lower = SpherePoint::from_z(c(-2.0, -0.25));
        let g = base_section(&lower).unwrap();
        assert!(act(&g, &base_point(Orbit::Lower).unwrap()).chordal_distance(&lower) < 1e-12);
        assert!(matches!(
            base_section(&SpherePoint::infinity()),
            Err(Error::BoundaryPoint)
        ));
    }
}
