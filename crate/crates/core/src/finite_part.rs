//! Meromorphic continuation of `s ↦ ∫ |t|^s φ(t) dt` for compactly
//! supported profiles `φ`.
//!
//! With `φₑ(t) = φ(t) + φ(-t) = Σ e_k t^k` on `[0, a]`,
//!
//! ```text
//! ∫|t|^s φ = Σ_k e_k a^{s+k+1}/(s+k+1) + ∫_a^R t^s φₑ(t) dt,
//! ```
//!
//! so the only poles are at `s = -(k+1)` with residue `e_k`. For smooth `φ`
//! the odd `e_k` vanish and the poles sit at `-1, -3, …` with residues
//! `2φ^{(2m)}(0)/(2m)!`.

use num_complex::Complex64;
use serde::Serialize;

use crate::haar::psi;
use crate::quadrature::{pairwise_sum, Axis};

/// Distance from a pole below which `s` is treated as sitting on it.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pole {
    pub location: i32,
    pub residue: f64,
}

/// Value of a meromorphic function at `s`: the function value, or at a
/// simple pole the finite part together with the pole record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeromorphicValue {
    pub s: Complex64,
    pub value: Complex64,
    pub pole: Option<Pole>,
}

impl MeromorphicValue {
    pub fn regular(s: Complex64, value: Complex64) -> Self {
        Self { s, value, pole: None }
    }
}

pub trait Profile: Sync {
    fn eval(&self, t: f64) -> f64;
    /// `φ = 0` for `|t| ≥ support()`.
    fn support(&self) -> f64;
    /// The cut `a`: the expansion of `φₑ` converges on `[0, a]`.
    fn cut(&self) -> f64;
    /// Number of expansion terms needed to reach round-off on `[0, a]`.
    fn terms(&self) -> usize;
    /// `e_0, …, e_{terms-1}`.
    fn even_expansion(&self) -> Vec<f64>;
}

fn poly_eval(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn poly_mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `Σ c_k t^k ↦ Σ (c_k + (-1)^k c_k) t^k`.
fn symmetrize(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .map(|(k, x)| if k % 2 == 0 { 2.0 * x } else { 0.0 })
        .collect()
}

/// Taylor coefficients of `ψ(t/r)` in `t`, via `ψ(√v) = e^{-1} exp(-v/(1-v))`
/// and the recurrence `n F_n = Σ_k k g_k F_{n-k}` for `F = exp(g)`.
fn bump_series(radius: f64, len: usize) -> Vec<f64> {
    let half = len.div_ceil(2);
    let mut f = vec![0.0; half];
    f[0] = 1.0;
    for n in 1..half {
        // g_k = -1 for every k ≥ 1
        let acc: f64 = (1..=n).map(|k| -(k as f64) * f[n - k]).sum();
        f[n] = acc / n as f64;
    }
    let mut out = vec![0.0; len];
    let inv_r2 = radius.powi(-2);
    let mut scale = (-1.0f64).exp();
    for (n, fn_) in f.iter().enumerate() {
        if 2 * n < len {
            out[2 * n] = fn_ * scale;
        }
        scale *= inv_r2;
    }
    out
}

/// `φ(t) = A p(t) ψ(t/r)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BumpProfile {
    pub radius: f64,
    pub amplitude: f64,
    pub poly: Vec<f64>,
}

impl BumpProfile {
    /// `p ≡ 1`, amplitude chosen so that `φ(0) = 1`.
    pub fn unit(radius: f64) -> Self {
        Self {
            radius,
            amplitude: 1f64.exp(),
            poly: vec![1.0],
        }
    }

    pub fn with_poly(radius: f64, poly: Vec<f64>) -> Self {
        Self {
            radius,
            amplitude: 1f64.exp(),
            poly,
        }
    }
}

impl Profile for BumpProfile {
    fn eval(&self, t: f64) -> f64 {
        self.amplitude * poly_eval(&self.poly, t) * psi(t / self.radius)
    }

    fn support(&self) -> f64 {
        self.radius
    }

    fn cut(&self) -> f64 {
        0.5 * self.radius
    }

    fn terms(&self) -> usize {
        120 + self.poly.len()
    }

    fn even_expansion(&self) -> Vec<f64> {
        let len = self.terms();
        let series = bump_series(self.radius, len);
        let full = poly_mul(&self.poly, &series, len);
        symmetrize(&full).into_iter().map(|c| c * self.amplitude).collect()
    }
}

/// `φ(t) = p(t)(1 - t²)^m` on `[-1, 1]`, zero outside.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialBump {
    pub poly: Vec<f64>,
    pub power: u32,
}

impl PolynomialBump {
    fn expanded(&self) -> Vec<f64> {
        let mut factor = vec![1.0];
        for _ in 0..self.power {
            let len = factor.len() + 2;
            factor = poly_mul(&factor, &[1.0, 0.0, -1.0], len);
        }
        let len = self.poly.len() + factor.len();
        poly_mul(&self.poly, &factor, len)
    }
}

impl Profile for PolynomialBump {
    fn eval(&self, t: f64) -> f64 {
        if t.abs() >= 1.0 {
            0.0
        } else {
            poly_eval(&self.poly, t) * (1.0 - t * t).powi(self.power as i32)
        }
    }

    fn support(&self) -> f64 {
        1.0
    }

    fn cut(&self) -> f64 {
        1.0
    }

    fn terms(&self) -> usize {
        self.poly.len() + 2 * self.power as usize + 1
    }

    fn even_expansion(&self) -> Vec<f64> {
        symmetrize(&self.expanded())
    }
}

/// `|t|^m · φ(t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AbsPower<P> {
    pub power: u32,
    pub inner: P,
}

impl<P: Profile> Profile for AbsPower<P> {
    fn eval(&self, t: f64) -> f64 {
        t.abs().powi(self.power as i32) * self.inner.eval(t)
    }

    fn support(&self) -> f64 {
        self.inner.support()
    }

    fn cut(&self) -> f64 {
        self.inner.cut()
    }

    fn terms(&self) -> usize {
        self.inner.terms() + self.power as usize
    }

    fn even_expansion(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.power as usize];
        out.extend(self.inner.even_expansion());
        out
    }
}

fn tail_axis<P: Profile + ?Sized>(phi: &P) -> Option<Axis> {
    let (a, r) = (phi.cut(), phi.support());
    (r > a).then(|| Axis::panels(a, r, 48, 12))
}

fn even_part<P: Profile + ?Sized>(phi: &P, t: f64) -> f64 {
    phi.eval(t) + phi.eval(-t)
}

/// Continuation of `∫ |t|^s φ(t) dt` to `s ∈ C`.
pub fn finite_part<P: Profile + ?Sized>(phi: &P, s: Complex64) -> MeromorphicValue {
    let a = phi.cut();
    let ln_a = a.ln();
    let mut pole = None;
    let mut terms = Vec::new();
    for (k, e) in phi.even_expansion().into_iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        let shift = s + (k as f64 + 1.0);
        if shift.norm() < POLE_TOL {
            pole = Some(Pole {
                location: -(k as i32 + 1),
                residue: e,
            });
            terms.push(Complex64::new(e * ln_a, 0.0));
        } else {
            terms.push((shift * ln_a).exp() * e / shift);
        }
    }
    let series_re = pairwise_sum(&terms.iter().map(|c| c.re).collect::<Vec<_>>());
    let series_im = pairwise_sum(&terms.iter().map(|c| c.im).collect::<Vec<_>>());
    let mut value = Complex64::new(series_re, series_im);
    if let Some(axis) = tail_axis(phi) {
        let re = axis.integrate(|t| (s * t.ln()).exp().re * even_part(phi, t));
        let im = axis.integrate(|t| (s * t.ln()).exp().im * even_part(phi, t));
        value += Complex64::new(re, im);
    }
    MeromorphicValue { s, value, pole }
}

/// Laurent coefficients at `s = -1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaurentSeries {
    /// `coefficients[0]` is `S_{-1}`, `coefficients[j + 1]` is `S_j`.
    pub coefficients: Vec<f64>,
}

impl LaurentSeries {
    pub fn coefficient(&self, j: i32) -> f64 {
        usize::try_from(j + 1)
            .ok()
            .and_then(|i| self.coefficients.get(i))
            .copied()
            .unwrap_or(0.0)
    }
}

/// `S_{-1}, S_0, …, S_order` of `Σ_j S_j(φ)(s+1)^j`.
pub fn laurent_at_minus_one<P: Profile + ?Sized>(phi: &P, order: usize) -> LaurentSeries {
    let a = phi.cut();
    let ln_a = a.ln();
    let mut out = vec![0.0; order + 2];
    let factorial = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
    for (k, e) in phi.even_expansion().into_iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        if k == 0 {
            // e a^ε/ε = e Σ_j L^j ε^{j-1} / j!
            out[0] += e;
            for j in 0..=order {
                out[j + 1] += e * ln_a.powi(j as i32 + 1) / factorial(j + 1);
            }
        } else {
            // e a^k e^{εL} / (k + ε)
            let kf = k as f64;
            let ak = a.powi(k as i32);
            for j in 0..=order {
                let c: f64 = (0..=j)
                    .map(|i| {
                        let m = j - i;
                        ln_a.powi(i as i32) / factorial(i) * (-1f64).powi(m as i32) / kf.powi(m as i32 + 1)
                    })
                    .sum();
                out[j + 1] += e * ak * c;
            }
        }
    }
    if let Some(axis) = tail_axis(phi) {
        for j in 0..=order {
            out[j + 1] += axis.integrate(|t| t.ln().powi(j as i32) / factorial(j) / t * even_part(phi, t));
        }
    }
    LaurentSeries { coefficients: out }
}
