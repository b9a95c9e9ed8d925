//! Fixed points of left translations `l_{g⁻¹}` on homogeneous spaces `G/H`.
//!
//! Two isotropy subgroups are supported: `K = SO(n)` (the symmetric space)
//! and the minimal parabolic `P` of upper-triangular matrices (the full flag
//! manifold). Tangent spaces are modelled on the complement `𝔮` of `𝔥` that
//! is orthogonal for `Tr(XYᵗ)`: `𝔭` for `K`, strictly lower-triangular
//! matrices for `P`. The normal chart at `xH` is `q ↦ x·exp(q)·H`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{log_unipotent, AlgebraElement, GroupElement};
use crate::sphere::{self, SpherePoint};

/// Relative gap below which eigenvalues count as repeated.
pub const EIGEN_GAP: f64 = 1e-8;
/// `|det(1 - dl)|` at or below this is a degenerate fixed point.
pub const TRANSVERSAL_TOL: f64 = 1e-8;
const MEMBERSHIP_TOL: f64 = 1e-10;
const FD_STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subgroup {
    /// `K = SO(n)`
    Compact,
    /// `P`, upper-triangular matrices of determinant one
    MinimalParabolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    /// `G/P`, complete flags in `R^n`
    FlagManifold,
    /// `G/K`; fixed points are implemented for `n = 2`
    SymmetricSpace,
    /// the compactification of `SL(2,R)/SO(2)` realized as the Riemann sphere
    OshimaSphere,
}

/// A complete flag `V_1 ⊂ … ⊂ V_{n-1}` together with a coset representative
/// `x` such that `V_k` is spanned by the first `k` columns of `x`.
#[derive(Clone, Debug, Serialize)]
pub struct Flag {
    pub n: usize,
    /// Orthonormal bases, `bases[k]` has `k + 1` columns.
    #[serde(serialize_with = "serialize_bases")]
    pub bases: Vec<DMatrix<f64>>,
    pub representative: GroupElement,
}

fn serialize_bases<S: serde::Serializer>(b: &[DMatrix<f64>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(b.len()))?;
    for m in b {
        let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
        seq.serialize_element(&rows)?;
    }
    seq.end()
}

impl Flag {
    pub fn from_representative(x: GroupElement) -> Self {
        let n = x.dim();
        let q = x.as_mat().clone().qr().q();
        let bases = (1..n).map(|k| q.columns(0, k).into_owned()).collect();
        Self {
            n,
            bases,
            representative: x,
        }
    }

    fn projection_residual(basis: &DMatrix<f64>, v: &DMatrix<f64>) -> f64 {
        let proj = basis * (basis.transpose() * v);
        (v - proj).amax()
    }

    /// Largest residual of `V_k ⊂ V_{k+1}`.
    pub fn nesting_residual(&self) -> f64 {
        self.bases
            .windows(2)
            .map(|w| Self::projection_residual(&w[1], &w[0]))
            .fold(0.0, f64::max)
    }

    /// Largest residual of `g V_k ⊂ V_k`, relative to `‖g‖`.
    pub fn invariance_residual(&self, g: &GroupElement) -> f64 {
        let scale = g.as_mat().amax().max(1.0);
        self.bases
            .iter()
            .map(|b| Self::projection_residual(b, &(g.as_mat() * b)) / scale)
            .fold(0.0, f64::max)
    }
}

fn is_central(g: &GroupElement) -> bool {
    let n = g.dim();
    let c = g.get(0, 0);
    (g.as_mat() - DMatrix::identity(n, n) * c).amax() <= MEMBERSHIP_TOL && (c.abs() - 1.0).abs() <= MEMBERSHIP_TOL
}

fn eigenvalues(g: &GroupElement) -> Vec<Complex64> {
    g.as_mat().clone().complex_eigenvalues().iter().copied().collect()
}

fn distinct(eigs: &[Complex64]) -> bool {
    let scale = eigs.iter().map(|l| l.norm()).fold(1.0, f64::max);
    eigs.iter()
        .enumerate()
        .all(|(a, la)| eigs[a + 1..].iter().all(|lb| (la - lb).norm() > EIGEN_GAP * scale))
}

/// `g` has `n` distinct eigenvalues over `C`.
pub fn is_regular(g: &GroupElement) -> bool {
    distinct(&eigenvalues(g))
}

/// Real eigenpairs of a regular real-split `g`, eigenvalues descending.
pub fn real_eigenpairs(g: &GroupElement) -> Result<Vec<(f64, DVector<f64>)>> {
    let eigs = eigenvalues(g);
    let scale = eigs.iter().map(|l| l.norm()).fold(1.0, f64::max);
    if let Some(l) = eigs.iter().find(|l| l.im.abs() > EIGEN_GAP * scale) {
        return Err(Error::NotRealSemisimpleRegular(format!("non-real eigenvalue {l}")));
    }
    if !distinct(&eigs) {
        return Err(Error::NotRealSemisimpleRegular("repeated eigenvalue".into()));
    }
    let n = g.dim();
    let mut values: Vec<f64> = eigs.iter().map(|l| l.re).collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    values
        .into_iter()
        .map(|lambda| {
            let shifted = g.as_mat() - DMatrix::identity(n, n) * lambda;
            let svd = shifted.svd(false, true);
            let v_t = svd.v_t.expect("requested");
            let (idx, _) = svd
                .singular_values
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                .unwrap();
            let v: DVector<f64> = v_t.row(idx).transpose();
            let residual = (g.as_mat() * &v - &v * lambda).amax();
            if residual > 1e-8 * scale {
                return Err(Error::NotRealSemisimpleRegular(format!(
                    "eigenvector residual {residual:e}"
                )));
            }
            Ok((lambda, v))
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// All complete flags fixed by `g`: one per ordering of its eigenlines.
pub fn fixed_flags(g: &GroupElement) -> Result<Vec<Flag>> {
    let pairs = real_eigenpairs(g)?;
    let n = g.dim();
    Ok(permutations(n)
        .into_iter()
        .map(|perm| {
            let mut x = DMatrix::zeros(n, n);
            for (col, &k) in perm.iter().enumerate() {
                x.set_column(col, &pairs[k].1);
            }
            if x.determinant() < 0.0 {
                x.column_mut(0).neg_mut();
            }
            let x = GroupElement::normalized(x).expect("eigenvectors are independent");
            Flag::from_representative(x)
        })
        .collect())
}

fn in_subgroup(h: &DMatrix<f64>, subgroup: Subgroup) -> f64 {
    let n = h.nrows();
    match subgroup {
        Subgroup::Compact => (h.transpose() * h - DMatrix::<f64>::identity(n, n)).amax(),
        Subgroup::MinimalParabolic => {
            let scale = h.amax().max(1.0);
            (0..n)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| h[(i, j)].abs())
                .fold(0.0, f64::max)
                / scale
        }
    }
}

/// `h(g, x) = x⁻¹ g x`, required to lie in `H`.
pub fn isotropy_rep(g: &GroupElement, x: &GroupElement, subgroup: Subgroup) -> Result<GroupElement> {
    let h = g.conjugate_by(x);
    let residual = in_subgroup(h.as_mat(), subgroup);
    if residual > MEMBERSHIP_TOL {
        return Err(Error::NotAFixedPoint(residual));
    }
    Ok(h)
}

/// Basis of the complement `𝔮` of `𝔥`.
pub fn complement_basis(n: usize, subgroup: Subgroup) -> Vec<AlgebraElement> {
    let mut out = Vec::new();
    match subgroup {
        Subgroup::Compact => {
            for i in 0..n {
                for j in i + 1..n {
                    out.push(AlgebraElement::elementary(n, i, j).add(&AlgebraElement::elementary(n, j, i)));
                }
            }
            for k in 0..n - 1 {
                let mut d = vec![0.0; n];
                d[k] = 1.0;
                d[k + 1] = -1.0;
                out.push(AlgebraElement::diagonal(&d));
            }
        }
        Subgroup::MinimalParabolic => {
            for i in 0..n {
                for j in 0..i {
                    out.push(AlgebraElement::elementary(n, i, j));
                }
            }
        }
    }
    out
}

/// Coordinates in [`complement_basis`] of the projection of `X` onto `𝔮`
/// along `𝔥`.
pub fn project_to_complement(x: &DMatrix<f64>, subgroup: Subgroup) -> DVector<f64> {
    let n = x.nrows();
    let mut out = Vec::new();
    match subgroup {
        Subgroup::Compact => {
            let sym = (x + x.transpose()) * 0.5;
            for i in 0..n {
                for j in i + 1..n {
                    out.push(sym[(i, j)]);
                }
            }
            let mut partial = 0.0;
            for k in 0..n - 1 {
                partial += sym[(k, k)];
                out.push(partial);
            }
        }
        Subgroup::MinimalParabolic => {
            for i in 0..n {
                for j in 0..i {
                    out.push(x[(i, j)]);
                }
            }
        }
    }
    DVector::from_vec(out)
}

fn from_complement(coords: &DVector<f64>, n: usize, subgroup: Subgroup) -> AlgebraElement {
    complement_basis(n, subgroup)
        .iter()
        .zip(coords.iter())
        .fold(AlgebraElement::zero(n), |acc, (b, c)| acc.add(&b.scale(*c)))
}

/// Matrix of the isotropy action `Ad(h)` on `𝔤/𝔥 ≅ 𝔮`.
pub fn jacobian_via_ad(h: &GroupElement, subgroup: Subgroup) -> DMatrix<f64> {
    let n = h.dim();
    let basis = complement_basis(n, subgroup);
    let mut out = DMatrix::zeros(basis.len(), basis.len());
    for (col, b) in basis.iter().enumerate() {
        out.set_column(col, &project_to_complement(h.adjoint(b).as_mat(), subgroup));
    }
    out
}

/// Normal-chart coordinates of the coset `yH` around `xH`.
pub fn chart_coordinates(x: &GroupElement, y: &GroupElement, subgroup: Subgroup) -> Result<DVector<f64>> {
    let m = x.inverse().as_mat() * y.as_mat();
    let q = match subgroup {
        Subgroup::Compact => {
            // x⁻¹y = exp(q)·k  ⇒  (x⁻¹y)(x⁻¹y)ᵗ = exp(2q)
            let eig = (&m * m.transpose()).symmetric_eigen();
            if eig.eigenvalues.iter().any(|l| *l <= 0.0) {
                return Err(Error::ChartBreakdown);
            }
            let logs = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 0.5 * l.ln()));
            &eig.eigenvectors * logs * eig.eigenvectors.transpose()
        }
        Subgroup::MinimalParabolic => {
            // x⁻¹y = L·U with L unipotent lower triangular ⇒ q = log L
            log_unipotent(&unit_lower_factor(&m)?)
        }
    };
    Ok(project_to_complement(&q, subgroup))
}

/// Doolittle factor `L` of `m = L U` without pivoting.
fn unit_lower_factor(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let scale = m.amax().max(1.0);
    let mut l = DMatrix::<f64>::identity(n, n);
    let mut u = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for k in i..n {
            let s: f64 = (0..i).map(|j| l[(i, j)] * u[(j, k)]).sum();
            u[(i, k)] = m[(i, k)] - s;
        }
        if u[(i, i)].abs() < 1e-12 * scale {
            return Err(Error::ChartBreakdown);
        }
        for k in i + 1..n {
            let s: f64 = (0..i).map(|j| l[(k, j)] * u[(j, i)]).sum();
            l[(k, i)] = (m[(k, i)] - s) / u[(i, i)];
        }
    }
    Ok(l)
}

/// Matrix of `d(l_{g⁻¹})` at the fixed point `xH` in the normal chart, by
/// central differences with one Richardson step.
pub fn jacobian_via_chart(g: &GroupElement, x: &GroupElement, subgroup: Subgroup) -> Result<DMatrix<f64>> {
    isotropy_rep(g, x, subgroup)?;
    let n = g.dim();
    let dim = complement_basis(n, subgroup).len();
    let g_inv = g.inverse();
    let image = |q: &DVector<f64>| -> Result<DVector<f64>> {
        let y = &(&g_inv * x) * &from_complement(q, n, subgroup).exp();
        chart_coordinates(x, &y, subgroup)
    };
    let central = |h: f64| -> Result<DMatrix<f64>> {
        let mut jac = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut e = DVector::zeros(dim);
            e[col] = h;
            let d = (image(&e)? - image(&(-&e))?) / (2.0 * h);
            jac.set_column(col, &d);
        }
        Ok(jac)
    };
    let mut step = FD_STEP;
    let mut last_err = Error::ChartBreakdown;
    for _ in 0..3 {
        match (central(step), central(step / 2.0)) {
            (Ok(coarse), Ok(fine)) => return Ok((fine * 4.0 - coarse) / 3.0),
            (Err(e), _) | (_, Err(e)) => {
                last_err = e;
                step /= 10.0;
            }
        }
    }
    Err(last_err)
}

pub fn det_one_minus(m: &DMatrix<f64>) -> f64 {
    (DMatrix::identity(m.nrows(), m.ncols()) - m).determinant()
}

/// Both sides of `det(1 - dl_{g⁻¹})_{xH} = det(1 - Ad^G_H(h))`.
///
/// With `h = x⁻¹gx` the isotropy representative, `g⁻¹x = x h⁻¹`, so the
/// chart derivative is conjugate to `Ad(h⁻¹)` on `𝔤/𝔥`; the right-hand
/// side is evaluated at `h⁻¹`.
pub fn determinant_pair(g: &GroupElement, x: &GroupElement, subgroup: Subgroup) -> Result<(f64, f64)> {
    let h = isotropy_rep(g, x, subgroup)?;
    let det_chart = det_one_minus(&jacobian_via_chart(g, x, subgroup)?);
    let det_ad = det_one_minus(&jacobian_via_ad(&h.inverse(), subgroup));
    Ok((det_chart, det_ad))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Location {
    Flag(Flag),
    Coset { representative: GroupElement },
    Sphere { point: SpherePoint },
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointRecord {
    pub location: Location,
    pub isotropy_h: GroupElement,
    pub det_chart: f64,
    pub det_ad: f64,
    pub transversal: bool,
}

impl FixedPointRecord {
    fn build(g: &GroupElement, x: GroupElement, subgroup: Subgroup, location: Location) -> Result<Self> {
        let h = isotropy_rep(g, &x, subgroup)?;
        let (det_chart, det_ad) = determinant_pair(g, &x, subgroup)?;
        Ok(Self {
            location,
            isotropy_h: h,
            det_chart,
            det_ad,
            transversal: det_ad.abs() > TRANSVERSAL_TOL,
        })
    }
}

fn central_record(g: &GroupElement, location: Location) -> FixedPointRecord {
    FixedPointRecord {
        location,
        isotropy_h: g.clone(),
        det_chart: 0.0,
        det_ad: 0.0,
        transversal: false,
    }
}

/// Fixed-point records of `l_{g⁻¹}` on `space`. Central elements fix every
/// point; they are reported through the base point with zero determinants.
pub fn fixed_point_records(g: &GroupElement, space: Space) -> Result<Vec<FixedPointRecord>> {
    let n = g.dim();
    match space {
        Space::FlagManifold => {
            if is_central(g) {
                let base = Flag::from_representative(GroupElement::identity(n));
                return Ok(vec![central_record(g, Location::Flag(base))]);
            }
            fixed_flags(g)?
                .into_iter()
                .map(|flag| {
                    let x = flag.representative.clone();
                    FixedPointRecord::build(g, x, Subgroup::MinimalParabolic, Location::Flag(flag))
                })
                .collect()
        }
        Space::SymmetricSpace => {
            if n != 2 {
                return Err(Error::UnsupportedRank(n));
            }
            if is_central(g) {
                let base = GroupElement::identity(2);
                return Ok(vec![central_record(g, Location::Coset { representative: base })]);
            }
            let upper: Vec<SpherePoint> = sphere::fixed_points_on_sphere(g)?
                .into_iter()
                .map(|r| r.point)
                .filter(|p| p.orbit() == sphere::Orbit::Upper)
                .collect();
            upper
                .into_iter()
                .map(|p| {
                    let x = sphere::base_section(&p)?;
                    FixedPointRecord::build(g, x.clone(), Subgroup::Compact, Location::Coset { representative: x })
                })
                .collect()
        }
        Space::OshimaSphere => {
            if n != 2 {
                return Err(Error::UnsupportedRank(n));
            }
            if is_central(g) {
                let base = SpherePoint::from_z(Complex64::new(0.0, 1.0));
                return Ok(vec![central_record(g, Location::Sphere { point: base })]);
            }
            sphere::fixed_points_on_sphere(g)?
                .into_iter()
                .map(|r| {
                    let det_chart = det_one_minus(&sphere::dphi_finite_difference(g, &r.point)?);
                    Ok(FixedPointRecord {
                        isotropy_h: g.clone(),
                        det_chart,
                        det_ad: r.det_one_minus_dphi,
                        transversal: r.transversal,
                        location: Location::Sphere { point: r.point },
                    })
                })
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Transversality {
    pub transversal: bool,
    /// `min |det(1 - dl_{g⁻¹})|` over fixed points; infinite when there are none.
    pub margin: f64,
}

pub fn is_transversal(g: &GroupElement, space: Space) -> Result<Transversality> {
    let records = fixed_point_records(g, space)?;
    let margin = records.iter().map(|r| r.det_ad.abs()).fold(f64::INFINITY, f64::min);
    Ok(Transversality {
        transversal: records.iter().all(|r| r.transversal),
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rotation(theta: f64) -> GroupElement {
        let (s, c) = theta.sin_cos();
        GroupElement::from_rows(&[vec![c, -s], vec![s, c]]).unwrap()
    }

    #[test]
    fn diagonal_element_has_six_fixed_flags() {
        let g = GroupElement::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        let flags = fixed_flags(&g).unwrap();
        assert_eq!(flags.len(), 6);
        for f in &flags {
            assert!(f.invariance_residual(&g) < 1e-10);
            assert!(f.nesting_residual() < 1e-10);
        }
    }

    #[test]
    fn rotation_has_no_fixed_line() {
        let err = fixed_flags(&rotation(1.0)).unwrap_err();
        assert!(matches!(err, Error::NotRealSemisimpleRegular(_)));
    }

    #[test]
    fn hyperbolic_sl2_fixes_both_axes() {
        let g = GroupElement::diagonal(&[2.0, 0.5]).unwrap();
        let flags = fixed_flags(&g).unwrap();
        assert_eq!(flags.len(), 2);
        let mut lines: Vec<f64> = flags.iter().map(|f| f.bases[0][(0, 0)].abs()).collect();
        lines.sort_by(f64::total_cmp);
        assert!(lines[0] < 1e-12 && (lines[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unipotent_is_rejected_by_flag_enumeration() {
        let u = GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(fixed_flags(&u).is_err());
    }

    #[test]
    fn isotropy_at_identity_and_non_fixed_points() {
        let g = GroupElement::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        let id = GroupElement::identity(3);
        assert_eq!(isotropy_rep(&g, &id, Subgroup::MinimalParabolic).unwrap(), g);
        let x = GroupElement::from_rows(&[vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        assert!(matches!(
            isotropy_rep(&g, &x, Subgroup::MinimalParabolic),
            Err(Error::NotAFixedPoint(_))
        ));
    }

    #[test]
    fn isotropy_at_permuted_eigenbasis_is_upper_triangular() {
        let g = GroupElement::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        for flag in fixed_flags(&g).unwrap() {
            let h = isotropy_rep(&g, &flag.representative, Subgroup::MinimalParabolic).unwrap();
            assert!(in_subgroup(h.as_mat(), Subgroup::MinimalParabolic) < 1e-12);
        }
    }

    #[test]
    fn jacobians_at_identity() {
        let id = GroupElement::identity(3);
        let jac = jacobian_via_chart(&id, &id, Subgroup::MinimalParabolic).unwrap();
        assert!((jac - DMatrix::<f64>::identity(3, 3)).amax() < 1e-9);
        assert_eq!(jacobian_via_ad(&id, Subgroup::Compact), DMatrix::<f64>::identity(5, 5));
    }

    #[test]
    fn chart_jacobian_on_projective_line() {
        // l_{g⁻¹} scales the chart around e₁ by λ², around e₂ by λ⁻²
        let lambda = 2.0;
        let g = GroupElement::diagonal(&[lambda, 1.0 / lambda]).unwrap();
        let e1 = GroupElement::identity(2);
        let jac = jacobian_via_chart(&g, &e1, Subgroup::MinimalParabolic).unwrap();
        assert!((jac[(0, 0)] - lambda * lambda).abs() < 1e-8);
        let (chart, ad) = determinant_pair(&g, &e1, Subgroup::MinimalParabolic).unwrap();
        assert!((chart - ad).abs() < 1e-8 && (ad - (1.0 - lambda * lambda)).abs() < 1e-12);
    }

    #[test]
    fn ad_on_p_for_rotation() {
        for theta in [0.3, 1.0, 2.0] {
            let jac = jacobian_via_ad(&rotation(theta), Subgroup::Compact);
            let expected = 4.0 * theta.sin().powi(2);
            assert!((det_one_minus(&jac) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn ad_on_flag_tangent_is_negative_root_product() {
        let h = GroupElement::diagonal(&[2.0, 1.0, 0.5]).unwrap();
        let det = det_one_minus(&jacobian_via_ad(&h, Subgroup::MinimalParabolic));
        assert!((det - 0.5 * 0.75 * 0.5).abs() < 1e-14);
    }

    #[test]
    fn transversality_examples() {
        let elliptic = rotation(0.7);
        let t = is_transversal(&elliptic, Space::SymmetricSpace).unwrap();
        assert!(t.transversal);
        assert!((t.margin - 4.0 * 0.7f64.sin().powi(2)).abs() < 1e-8);

        let u = GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(!is_transversal(&u, Space::OshimaSphere).unwrap().transversal);

        for space in [Space::FlagManifold, Space::SymmetricSpace, Space::OshimaSphere] {
            let t = is_transversal(&GroupElement::identity(2), space).unwrap();
            assert!(!t.transversal && t.margin == 0.0);
        }
    }

    #[test]
    fn sphere_records_pair_finite_differences_with_closed_form() {
        let records = fixed_point_records(&rotation(PI / 3.0), Space::OshimaSphere).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            assert!((r.det_ad - 3.0).abs() < 1e-12);
            assert!((r.det_chart - 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn records_serialize_on_every_space() {
        let cases = [
            (GroupElement::diagonal(&[2.0, 1.0, 0.5]).unwrap(), Space::FlagManifold),
            (rotation(1.0), Space::SymmetricSpace),
            (rotation(PI / 3.0), Space::OshimaSphere),
        ];
        for (g, space) in cases {
            let records = fixed_point_records(&g, space).unwrap();
            let json = serde_json::to_value(&records).unwrap();
            assert!(json[0]["location"]["kind"].is_string());
        }
    }

    #[test]
    fn regularity() {
        assert!(is_regular(&GroupElement::diagonal(&[2.0, 1.0, 0.5]).unwrap()));
        let jordan = GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(!is_regular(&jordan));
        assert!(is_regular(&rotation(1.0)));
        assert!(!is_regular(&rotation(PI)));
    }
}
