//! Structure theory of `sl(n, R)` with the Cartan involution `X ↦ -Xᵗ`.
//!
//! Roots are written one-based, `e_i - e_j` with `1 ≤ i ≠ j ≤ n`, and the
//! diagonal subalgebra `𝔞` is the maximal abelian subspace of `𝔭`. For a
//! subset `Θ` of the simple roots the parabolic data splits into
//!
//! * the Levi part `𝔫±(Θ)`, `𝔞(Θ)` generated by roots in the span of `Θ`,
//! * the nilradical `𝔫±_Θ` and the split center `𝔞_Θ`,
//! * the compact centralizer `𝔪_Θ(𝔨)` of `𝔞_Θ` in `𝔨`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{AlgebraElement, GroupElement, SquareMatrix};

/// The restricted root `e_i - e_j` (one-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RestrictedRoot {
    pub i: usize,
    pub j: usize,
}

impl RestrictedRoot {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if i == j || i == 0 || j == 0 {
            return Err(Error::InvalidRoot(i, j));
        }
        Ok(Self { i, j })
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    pub fn is_simple(&self) -> bool {
        self.j == self.i + 1
    }

    pub fn negative(&self) -> Self {
        Self { i: self.j, j: self.i }
    }

    /// `α(H) = H_ii - H_jj` for diagonal `H`.
    pub fn evaluate(&self, h: &AlgebraElement) -> f64 {
        h.as_mat()[(self.i - 1, self.i - 1)] - h.as_mat()[(self.j - 1, self.j - 1)]
    }

    fn check_rank(&self, n: usize) -> Result<()> {
        if self.i > n || self.j > n {
            return Err(Error::InvalidRoot(self.i, self.j));
        }
        Ok(())
    }
}

impl fmt::Display for RestrictedRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.i, self.j)
    }
}

impl Serialize for RestrictedRoot {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The root system `Σ` of `(sl(n), 𝔞)` with the standard ordering.
#[derive(Clone, Debug)]
pub struct RootSystem {
    n: usize,
    roots: Vec<RestrictedRoot>,
}

pub fn restricted_roots(n: usize) -> Result<RootSystem> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    let mut roots = Vec::with_capacity(n * (n - 1));
    // positive roots first, ordered by height then by i
    for height in 1..n {
        for i in 1..=n - height {
            roots.push(RestrictedRoot { i, j: i + height });
        }
    }
    let negatives: Vec<_> = roots.iter().map(RestrictedRoot::negative).collect();
    roots.extend(negatives);
    Ok(RootSystem { n, roots })
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> &[RestrictedRoot] {
        &self.roots
    }

    pub fn positive(&self) -> Vec<RestrictedRoot> {
        self.roots.iter().copied().filter(RestrictedRoot::is_positive).collect()
    }

    pub fn negative(&self) -> Vec<RestrictedRoot> {
        self.roots.iter().copied().filter(|r| !r.is_positive()).collect()
    }

    pub fn simple(&self) -> Vec<RestrictedRoot> {
        (1..self.n).map(|i| RestrictedRoot { i, j: i + 1 }).collect()
    }
}

/// A subset `Θ ⊆ Δ`, stored as the one-based indices `k` of the simple roots
/// `e_k - e_{k+1}` it contains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSubset {
    n: usize,
    members: Vec<usize>,
}

impl ThetaSubset {
    pub fn new(n: usize, roots: &[RestrictedRoot]) -> Result<Self> {
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        let mut members = Vec::new();
        for r in roots {
            r.check_rank(n)?;
            if !r.is_simple() {
                return Err(Error::NotSimple(r.i, r.j));
            }
            members.push(r.i);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { n, members })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, members: vec![] }
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            members: (1..n).collect(),
        }
    }

    /// All `2^(n-1)` subsets, ordered by the bitmask over `e_1-e_2, e_2-e_3, …`.
    pub fn all_subsets(n: usize) -> Result<Vec<Self>> {
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        let l = n - 1;
        let mut out = Vec::with_capacity(1 << l);
        for mask in 0..(1usize << l) {
            let mut members: Vec<usize> = (0..l).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            members.sort_unstable();
            out.push(Self { n, members });
        }
        // stable by cardinality so that ∅ comes first and Δ last
        out.sort_by_key(|t| t.members.len());
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn roots(&self) -> Vec<RestrictedRoot> {
        self.members
            .iter()
            .map(|&k| RestrictedRoot { i: k, j: k + 1 })
            .collect()
    }

    /// Whether `α` lies in `⟨Θ⟩`, the roots spanned by `Θ`.
    pub fn spans(&self, alpha: &RestrictedRoot) -> bool {
        let (lo, hi) = (alpha.i.min(alpha.j), alpha.i.max(alpha.j));
        (lo..hi).all(|k| self.members.contains(&k))
    }

    /// Consecutive index blocks (zero-based) on which `𝔞_Θ` is constant.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![vec![0]];
        for idx in 1..self.n {
            if self.members.contains(&idx) {
                blocks.last_mut().unwrap().push(idx);
            } else {
                blocks.push(vec![idx]);
            }
        }
        blocks
    }
}

impl fmt::Display for ThetaSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.roots().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl Serialize for ThetaSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn cartan_involution(x: &AlgebraElement) -> AlgebraElement {
    x.transpose().scale(-1.0)
}

/// Splits `X` into its `𝔨` (antisymmetric) and `𝔭` (symmetric) parts.
pub fn cartan_decompose(x: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
    let xt = x.transpose();
    (x.sub(&xt).scale(0.5), x.add(&xt).scale(0.5))
}

/// The fixed basis of `sl(n)`: off-diagonal `E_ij` in row-major order, then
/// `H_k = E_kk - E_{k+1,k+1}`.
pub fn sl_basis(n: usize) -> Vec<AlgebraElement> {
    let mut basis = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(AlgebraElement::elementary(n, i, j));
            }
        }
    }
    for k in 0..n - 1 {
        let mut d = vec![0.0; n];
        d[k] = 1.0;
        d[k + 1] = -1.0;
        basis.push(AlgebraElement::diagonal(&d));
    }
    basis
}

/// Coordinates of `X` in [`sl_basis`].
pub fn sl_coordinates(x: &AlgebraElement) -> DVector<f64> {
    let n = x.dim();
    let m = x.as_mat();
    let mut coords = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                coords.push(m[(i, j)]);
            }
        }
    }
    let mut partial = 0.0;
    for k in 0..n - 1 {
        partial += m[(k, k)];
        coords.push(partial);
    }
    DVector::from_vec(coords)
}

/// Matrix of `ad X` in [`sl_basis`].
pub fn ad_matrix(x: &AlgebraElement) -> DMatrix<f64> {
    let basis = sl_basis(x.dim());
    let d = basis.len();
    let mut out = DMatrix::zeros(d, d);
    for (col, b) in basis.iter().enumerate() {
        out.set_column(col, &sl_coordinates(&x.bracket(b)));
    }
    out
}

fn same_dim(x: &AlgebraElement, y: &AlgebraElement) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(())
}

/// The Killing form `Tr(ad X ∘ ad Y)`, computed from the ad matrices.
pub fn killing_form(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    same_dim(x, y)?;
    Ok((ad_matrix(x) * ad_matrix(y)).trace())
}

/// `Tr(XY)`.
pub fn trace_form(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    same_dim(x, y)?;
    Ok((x.as_mat() * y.as_mat()).trace())
}

/// `-B(X, θY)` with `B` the Killing form.
pub fn theta_form(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    Ok(-killing_form(x, &cartan_involution(y))?)
}

/// `Tr(X Yᵗ)`, the trace-normalized version of [`theta_form`].
pub fn trace_theta_form(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    same_dim(x, y)?;
    Ok(x.as_mat().component_mul(y.as_mat()).sum())
}

/// The root vector `E_ij` spanning `𝔤^α` for `α = e_i - e_j`.
pub fn root_space_basis(alpha: &RestrictedRoot, n: usize) -> Result<AlgebraElement> {
    alpha.check_rank(n)?;
    Ok(AlgebraElement::elementary(n, alpha.i - 1, alpha.j - 1))
}

/// `Q_α = [θX, X]` for the root vector `X` normalized by [`trace_theta_form`].
pub fn q_vector(alpha: &RestrictedRoot, n: usize) -> Result<AlgebraElement> {
    let x = root_space_basis(alpha, n)?;
    let norm = trace_theta_form(&x, &x)?.sqrt();
    let x = x.scale(1.0 / norm);
    Ok(cartan_involution(&x).bracket(&x))
}

/// Basis of `{X ∈ 𝔨 : [X, H] = 0 for all H in a_basis}`.
///
/// The input must be diagonal. In the basis `E_ij - E_ji` of `𝔨` the stacked
/// bracket map is then diagonal, so its nullspace is spanned by the basis
/// vectors whose column vanishes.
pub fn centralizer_algebra(a_basis: &[AlgebraElement], n: usize) -> Result<Vec<AlgebraElement>> {
    for h in a_basis {
        if h.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: h.dim(),
            });
        }
        if !h.matrix().is_diagonal() {
            return Err(Error::InvalidParameter("centralizer input must be diagonal".into()));
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let k = AlgebraElement::elementary(n, i, j).sub(&AlgebraElement::elementary(n, j, i));
            let column_norm: f64 = a_basis.iter().map(|h| k.bracket(h).norm()).sum();
            if column_norm <= 1e-12 {
                out.push(k);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ParabolicDims {
    pub levi_n_plus: usize,
    pub nilradical_plus: usize,
    pub levi_a: usize,
    pub center_a: usize,
    pub m_k: usize,
}

/// Parabolic data attached to `Θ ⊆ Δ`.
#[derive(Clone, Debug, Serialize)]
pub struct ParabolicData {
    pub theta: ThetaSubset,
    /// `𝔫⁺(Θ)`
    pub levi_n_plus: Vec<AlgebraElement>,
    /// `𝔫⁻(Θ)`
    pub levi_n_minus: Vec<AlgebraElement>,
    /// `𝔫⁺_Θ`
    pub nilradical_plus: Vec<AlgebraElement>,
    /// `𝔫⁻_Θ = θ(𝔫⁺_Θ)`, listed so that `θ(nilradical_plus[k]) = -nilradical_minus[k]`.
    pub nilradical_minus: Vec<AlgebraElement>,
    /// `𝔞(Θ)`, spanned by `Q_α` for the simple roots in `Θ`.
    pub levi_a: Vec<AlgebraElement>,
    /// `𝔞_Θ`, the orthogonal complement of `𝔞(Θ)` in `𝔞`.
    pub center_a: Vec<AlgebraElement>,
    /// `𝔪_Θ(𝔨)`
    pub m_k: Vec<AlgebraElement>,
    pub dims: ParabolicDims,
    /// `dim G/P_Θ(K)`
    pub orbit_dim: usize,
}

pub fn parabolic_data(theta: &ThetaSubset) -> Result<ParabolicData> {
    let n = theta.rank();
    let system = restricted_roots(n)?;
    let mut levi_n_plus = Vec::new();
    let mut levi_n_minus = Vec::new();
    let mut nilradical_plus = Vec::new();
    let mut nilradical_minus = Vec::new();
    for alpha in system.positive() {
        let x = root_space_basis(&alpha, n)?;
        let y = root_space_basis(&alpha.negative(), n)?;
        if theta.spans(&alpha) {
            levi_n_plus.push(x);
            levi_n_minus.push(y);
        } else {
            nilradical_plus.push(x);
            nilradical_minus.push(y);
        }
    }
    let levi_a = theta
        .roots()
        .iter()
        .map(|alpha| q_vector(alpha, n))
        .collect::<Result<Vec<_>>>()?;

    // 𝔞_Θ = {H ∈ 𝔞 : α(H) = 0 for α ∈ Θ}: constant on each block. Adjacent
    // blocks give the integral generators |B'|·1_B - |B|·1_B'.
    let blocks = theta.blocks();
    let center_a = blocks
        .windows(2)
        .map(|w| {
            let mut d = vec![0.0; n];
            for &i in &w[0] {
                d[i] = w[1].len() as f64;
            }
            for &i in &w[1] {
                d[i] = -(w[0].len() as f64);
            }
            AlgebraElement::diagonal(&d)
        })
        .collect::<Vec<_>>();
    let m_k = centralizer_algebra(&center_a, n)?;

    let dims = ParabolicDims {
        levi_n_plus: levi_n_plus.len(),
        nilradical_plus: nilradical_plus.len(),
        levi_a: levi_a.len(),
        center_a: center_a.len(),
        m_k: m_k.len(),
    };
    let dim_g = n * n - 1;
    let orbit_dim = dim_g - (dims.m_k + dims.center_a + dims.nilradical_plus);
    Ok(ParabolicData {
        theta: theta.clone(),
        levi_n_plus,
        levi_n_minus,
        nilradical_plus,
        nilradical_minus,
        levi_a,
        center_a,
        m_k,
        dims,
        orbit_dim,
    })
}

impl ParabolicData {
    /// `exp(Σ r_k X_k)` over a basis; used for the analytic subgroups
    /// `N±(Θ)`, `N±_Θ`, `A(Θ)`, `A_Θ`.
    pub fn subgroup_element(basis: &[AlgebraElement], params: &[f64]) -> Result<GroupElement> {
        if basis.len() != params.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: params.len(),
            });
        }
        let n = basis
            .first()
            .map(AlgebraElement::dim)
            .ok_or_else(|| Error::InvalidParameter("empty basis has no subgroup parameters".into()))?;
        let x = basis
            .iter()
            .zip(params)
            .fold(AlgebraElement::zero(n), |acc, (b, r)| acc.add(&b.scale(*r)));
        Ok(x.exp())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct OrbitCensusEntry {
    pub theta: ThetaSubset,
    pub multiplicity: usize,
    pub orbit_dim: usize,
    pub codim: usize,
}

/// One entry `2^{#Θ} · G/P_Θ(K)` for every `Θ ⊆ Δ`.
pub fn orbit_census(n: usize) -> Result<Vec<OrbitCensusEntry>> {
    ThetaSubset::all_subsets(n)?
        .into_iter()
        .map(|theta| {
            let data = parabolic_data(&theta)?;
            Ok(OrbitCensusEntry {
                multiplicity: 1 << theta.len(),
                orbit_dim: data.orbit_dim,
                codim: (n - 1) - theta.len(),
                theta,
            })
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Representatives in `M*` of the Weyl group: one signed permutation matrix
/// of determinant one for every permutation.
pub fn weyl_group(n: usize) -> Result<Vec<GroupElement>> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    Ok(permutations(n)
        .into_iter()
        .map(|perm| {
            let mut m = DMatrix::zeros(n, n);
            for (col, &row) in perm.iter().enumerate() {
                m[(row, col)] = 1.0;
            }
            if m.determinant() < 0.0 {
                m.column_mut(0).neg_mut();
            }
            GroupElement::new(SquareMatrix::new(m).expect("finite")).expect("det one")
        })
        .collect())
}

/// `M = Z_K(𝔞)`: the diagonal sign matrices of determinant one, in Gray-code
/// order of the first `n-1` signs.
pub fn m_group(n: usize) -> Result<Vec<GroupElement>> {
    if n < 2 {
        return Err(Error::RankTooSmall(n));
    }
    let l = n - 1;
    Ok((0..1usize << l)
        .map(|m| {
            let gray = m ^ (m >> 1);
            let mut signs: Vec<f64> = (0..l)
                .map(|k| if gray >> (l - 1 - k) & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            signs.push(signs.iter().product());
            GroupElement::diagonal(&signs).expect("sign matrices have det one")
        })
        .collect())
}

/// Representatives of the connected components of `M_Θ(K)`, one from `M` per
/// coset of `M ∩ M_Θ(K)_0`. Only ranks `n ≤ 3` are supported.
pub fn m_theta_components(theta: &ThetaSubset) -> Result<Vec<GroupElement>> {
    let n = theta.rank();
    if n > 3 {
        return Err(Error::UnsupportedRank(n));
    }
    let blocks = theta.blocks();
    // m lies in the identity component iff its signs multiply to +1 on every block
    let in_identity_component = |m: &GroupElement| {
        blocks
            .iter()
            .all(|b| b.iter().map(|&i| m.get(i, i)).product::<f64>() > 0.0)
    };
    let mut reps: Vec<GroupElement> = Vec::new();
    for m in m_group(n)? {
        let covered = reps.iter().any(|r| in_identity_component(&(&r.inverse() * &m)));
        if !covered {
            reps.push(m);
        }
    }
    Ok(reps)
}

#[derive(Clone, Debug, Serialize)]
pub struct RootReport {
    pub all: Vec<RestrictedRoot>,
    pub positive: Vec<RestrictedRoot>,
    pub simple: Vec<RestrictedRoot>,
    pub root_spaces: Vec<(RestrictedRoot, SquareMatrix)>,
    pub q_vectors: Vec<(RestrictedRoot, SquareMatrix)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub roots: RootReport,
    pub parabolic: std::collections::BTreeMap<String, ParabolicData>,
    pub census: Vec<OrbitCensusEntry>,
    pub weyl: Vec<GroupElement>,
    pub m: Vec<GroupElement>,
}

pub fn structure_report(n: usize) -> Result<StructureReport> {
    let system = restricted_roots(n)?;
    let positive = system.positive();
    let root_spaces = system
        .all()
        .iter()
        .map(|a| Ok((*a, root_space_basis(a, n)?.matrix().clone())))
        .collect::<Result<Vec<_>>>()?;
    let q_vectors = positive
        .iter()
        .map(|a| Ok((*a, q_vector(a, n)?.matrix().clone())))
        .collect::<Result<Vec<_>>>()?;
    let mut parabolic = std::collections::BTreeMap::new();
    for theta in ThetaSubset::all_subsets(n)? {
        parabolic.insert(theta.to_string(), parabolic_data(&theta)?);
    }
    Ok(StructureReport {
        n,
        roots: RootReport {
            all: system.all().to_vec(),
            simple: system.simple(),
            positive,
            root_spaces,
            q_vectors,
        },
        parabolic,
        census: orbit_census(n)?,
        weyl: weyl_group(n)?,
        m: m_group(n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> AlgebraElement {
        AlgebraElement::elementary(n, i - 1, j - 1)
    }

    #[test]
    fn involution_on_fixtures() {
        assert_eq!(cartan_involution(&e(3, 1, 2)), e(3, 2, 1).scale(-1.0));
        let h = AlgebraElement::diagonal(&[1.0, -1.0, 0.0]);
        assert_eq!(cartan_involution(&h), AlgebraElement::diagonal(&[-1.0, 1.0, 0.0]));
        let k = e(3, 1, 3).sub(&e(3, 3, 1));
        assert_eq!(cartan_involution(&k), k);
    }

    #[test]
    fn decomposition_of_e12() {
        let (k, p) = cartan_decompose(&e(3, 1, 2));
        assert_eq!(k, e(3, 1, 2).sub(&e(3, 2, 1)).scale(0.5));
        assert_eq!(p, e(3, 1, 2).add(&e(3, 2, 1)).scale(0.5));
        assert!(k.is_antisymmetric(0.0) && p.is_symmetric(0.0));
    }

    #[test]
    fn killing_form_of_h_in_sl2_is_8() {
        let h = AlgebraElement::diagonal(&[1.0, -1.0]);
        assert_eq!(killing_form(&h, &h).unwrap(), 8.0);
    }

    #[test]
    fn forms_reject_mismatched_dimensions() {
        let x = AlgebraElement::zero(2);
        let y = AlgebraElement::zero(3);
        assert!(killing_form(&x, &y).is_err());
        assert!(trace_theta_form(&x, &y).is_err());
    }

    #[test]
    fn trace_theta_form_normalizes_e12() {
        assert_eq!(trace_theta_form(&e(3, 1, 2), &e(3, 1, 2)).unwrap(), 1.0);
    }

    #[test]
    fn roots_of_sl3() {
        let sys = restricted_roots(3).unwrap();
        let show = |v: Vec<RestrictedRoot>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        assert_eq!(show(sys.positive()), ["e1-e2", "e2-e3", "e1-e3"]);
        assert_eq!(show(sys.simple()), ["e1-e2", "e2-e3"]);
        assert_eq!(restricted_roots(2).unwrap().all().len(), 2);
        assert_eq!(restricted_roots(4).unwrap().all().len(), 12);
        assert!(matches!(restricted_roots(1), Err(Error::RankTooSmall(1))));
    }

    #[test]
    fn root_vectors_and_brackets() {
        let a12 = RestrictedRoot::new(1, 2).unwrap();
        let a23 = RestrictedRoot::new(2, 3).unwrap();
        assert_eq!(root_space_basis(&a12, 3).unwrap(), e(3, 1, 2));
        assert_eq!(root_space_basis(&a23, 3).unwrap(), e(3, 2, 3));
        let h = AlgebraElement::diagonal(&[0.5, 2.0, -2.5]);
        let a13 = RestrictedRoot::new(1, 3).unwrap();
        assert_eq!(h.bracket(&e(3, 1, 3)), e(3, 1, 3).scale(0.5 - -2.5));
        assert_eq!(a13.evaluate(&h), 3.0);
        assert!(root_space_basis(&RestrictedRoot::new(1, 4).unwrap(), 3).is_err());
    }

    #[test]
    fn q_vectors() {
        let q = |i, j, n| q_vector(&RestrictedRoot::new(i, j).unwrap(), n).unwrap();
        assert_eq!(q(1, 2, 3), AlgebraElement::diagonal(&[1.0, -1.0, 0.0]));
        assert_eq!(q(2, 3, 3), AlgebraElement::diagonal(&[0.0, 1.0, -1.0]));
        assert_eq!(q(1, 2, 2), AlgebraElement::diagonal(&[1.0, -1.0]));
    }

    #[test]
    fn theta_subset_validation() {
        let bad = RestrictedRoot::new(1, 3).unwrap();
        assert!(matches!(ThetaSubset::new(3, &[bad]), Err(Error::NotSimple(1, 3))));
        let t = ThetaSubset::new(3, &[RestrictedRoot::new(1, 2).unwrap()]).unwrap();
        assert_eq!(t.to_string(), "{e1-e2}");
        assert_eq!(t.blocks(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn parabolic_e12_in_sl3() {
        let t = ThetaSubset::new(3, &[RestrictedRoot::new(1, 2).unwrap()]).unwrap();
        let p = parabolic_data(&t).unwrap();
        assert_eq!(p.center_a, vec![AlgebraElement::diagonal(&[1.0, 1.0, -2.0])]);
        assert_eq!(p.levi_a, vec![AlgebraElement::diagonal(&[1.0, -1.0, 0.0])]);
        assert_eq!(p.nilradical_plus, vec![e(3, 2, 3), e(3, 1, 3)]);
        assert_eq!(p.nilradical_minus, vec![e(3, 3, 2), e(3, 3, 1)]);
        assert_eq!(p.levi_n_plus, vec![e(3, 1, 2)]);
        assert_eq!(p.levi_n_minus, vec![e(3, 2, 1)]);
        assert_eq!(p.m_k, vec![e(3, 1, 2).sub(&e(3, 2, 1))]);
        assert_eq!(p.orbit_dim, 4);
    }

    #[test]
    fn parabolic_extremes_in_sl3() {
        let full = parabolic_data(&ThetaSubset::full(3)).unwrap();
        assert!(full.nilradical_plus.is_empty() && full.center_a.is_empty());
        assert_eq!(full.m_k.len(), 3);
        assert_eq!(full.orbit_dim, 5);
        let empty = parabolic_data(&ThetaSubset::empty(3)).unwrap();
        assert_eq!(empty.nilradical_plus.len(), 3);
        assert!(empty.m_k.is_empty());
        assert_eq!(empty.orbit_dim, 3);
    }

    #[test]
    fn census_sl2_and_sl3() {
        let c3 = orbit_census(3).unwrap();
        assert_eq!(c3.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), [1, 2, 2, 4]);
        assert_eq!(c3[1].theta.to_string(), "{e1-e2}");
        assert_eq!((c3[1].orbit_dim, c3[1].codim), (4, 1));
        let c2 = orbit_census(2).unwrap();
        assert_eq!(c2.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(c2.iter().map(|c| c.orbit_dim).collect::<Vec<_>>(), [1, 2]);
    }

    #[test]
    fn weyl_group_sizes_and_cosets() {
        assert_eq!(weyl_group(2).unwrap().len(), 2);
        let w = weyl_group(3).unwrap();
        assert_eq!(w.len(), 6);
        for (a, wa) in w.iter().enumerate() {
            for wb in &w[a + 1..] {
                assert!(!(&wa.inverse() * wb).matrix().is_diagonal());
            }
        }
    }

    #[test]
    fn m_group_matches_table() {
        let m = m_group(3).unwrap();
        let diags: Vec<Vec<f64>> = m.iter().map(|g| (0..3).map(|i| g.get(i, i)).collect()).collect();
        assert_eq!(
            diags,
            vec![
                vec![1.0, 1.0, 1.0],
                vec![1.0, -1.0, -1.0],
                vec![-1.0, -1.0, 1.0],
                vec![-1.0, 1.0, -1.0]
            ]
        );
    }

    #[test]
    fn components_of_m_theta() {
        let t = ThetaSubset::new(3, &[RestrictedRoot::new(1, 2).unwrap()]).unwrap();
        let reps = m_theta_components(&t).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[1], GroupElement::diagonal(&[1.0, -1.0, -1.0]).unwrap());
        assert_eq!(m_theta_components(&ThetaSubset::full(3)).unwrap().len(), 1);
        assert_eq!(m_theta_components(&ThetaSubset::empty(3)).unwrap().len(), 4);
        assert!(m_theta_components(&ThetaSubset::empty(4)).is_err());
    }
}
