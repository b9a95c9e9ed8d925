//! Matrix carriers for Lie algebra and group elements.
//!
//! Everything is a small dense `f64` matrix. Indices in this module are
//! zero-based; the root-system API in [`crate::lie_structure`] translates
//! from the usual one-based `e_i - e_j` notation.

use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance on `|det - 1|` accepted for group elements.
pub const DET_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct SquareMatrix(DMatrix<f64>);

impl SquareMatrix {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(mat))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, cols: r.len() });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { 0.0 }))
    }

    /// The elementary matrix with a single one in row `i`, column `j`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_mat(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// True when every entry is an exact integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.fract() == 0.0)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.0[(i, j)] == 0.0))
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl Serialize for SquareMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SquareMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SquareMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// An element of `sl(n, R)`: a traceless real matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct AlgebraElement(SquareMatrix);

impl AlgebraElement {
    pub fn new(mat: SquareMatrix) -> Result<Self> {
        let tr = mat.trace();
        if tr.abs() > 1e-12 * (1.0 + mat.max_abs()) {
            return Err(Error::NotTraceless(tr));
        }
        Ok(Self(mat))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub(crate) fn from_mat_unchecked(mat: DMatrix<f64>) -> Self {
        Self(SquareMatrix(mat))
    }

    pub fn zero(n: usize) -> Self {
        Self(SquareMatrix::zeros(n))
    }

    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        debug_assert!(i != j);
        Self(SquareMatrix::elementary(n, i, j))
    }

    /// Traceless diagonal element; panics in debug builds if the entries do
    /// not sum to zero.
    pub fn diagonal(entries: &[f64]) -> Self {
        debug_assert!(entries.iter().sum::<f64>().abs() < 1e-12);
        Self(SquareMatrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn as_mat(&self) -> &DMatrix<f64> {
        self.0.as_mat()
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_mat_unchecked(self.as_mat() * c)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_mat_unchecked(self.as_mat() + other.as_mat())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_mat_unchecked(self.as_mat() - other.as_mat())
    }

    /// Lie bracket `[X, Y] = XY - YX`.
    pub fn bracket(&self, other: &Self) -> Self {
        let (x, y) = (self.as_mat(), other.as_mat());
        Self::from_mat_unchecked(x * y - y * x)
    }

    pub fn norm(&self) -> f64 {
        self.as_mat().norm()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.as_mat() - self.as_mat().transpose()).amax() <= tol
    }

    pub fn is_antisymmetric(&self, tol: f64) -> bool {
        (self.as_mat() + self.as_mat().transpose()).amax() <= tol
    }

    /// `exp(X)` by scaling and squaring (nalgebra's Padé routine).
    pub fn exp(&self) -> GroupElement {
        if self.is_nilpotent_triangular() {
            return GroupElement(SquareMatrix(exp_nilpotent(self.as_mat())));
        }
        GroupElement(SquareMatrix(self.as_mat().clone().exp()))
    }

    fn is_nilpotent_triangular(&self) -> bool {
        let m = self.as_mat();
        let n = m.nrows();
        let strictly_upper = (0..n).all(|i| (0..=i).all(|j| m[(i, j)] == 0.0));
        let strictly_lower = (0..n).all(|i| (i..n).all(|j| m[(i, j)] == 0.0));
        strictly_upper || strictly_lower
    }
}

/// Finite exponential series of a nilpotent matrix. Exact for integer input.
pub fn exp_nilpotent(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut out = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..n {
        term = &term * x / k as f64;
        out += &term;
    }
    out
}

/// Finite logarithm series of a unipotent matrix `I + N`.
pub fn log_unipotent(u: &DMatrix<f64>) -> DMatrix<f64> {
    let n = u.nrows();
    let nil = u - DMatrix::<f64>::identity(n, n);
    let mut out = DMatrix::zeros(n, n);
    let mut pow = DMatrix::identity(n, n);
    for k in 1..n {
        pow = &pow * &nil;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        out += &pow * (sign / k as f64);
    }
    out
}

/// An element of `SL(n, R)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GroupElement(SquareMatrix);

impl GroupElement {
    pub fn new(mat: SquareMatrix) -> Result<Self> {
        let det = mat.determinant();
        if (det - 1.0).abs() > DET_TOL {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Self(mat))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub(crate) fn from_mat_unchecked(mat: DMatrix<f64>) -> Self {
        Self(SquareMatrix(mat))
    }

    /// Rescales a matrix with positive determinant onto `SL(n, R)`
    /// (negative determinant in odd dimension is absorbed by the sign).
    pub fn normalized(mat: DMatrix<f64>) -> Result<Self> {
        let n = mat.nrows();
        let det = mat.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NotUnimodular(det));
        }
        let root = det.abs().powf(1.0 / n as f64);
        let scaled = if det > 0.0 {
            mat / root
        } else if n % 2 == 1 {
            mat / -root
        } else {
            return Err(Error::NotUnimodular(det));
        };
        Self::new(SquareMatrix::new(scaled)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(SquareMatrix::identity(n))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(SquareMatrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn as_mat(&self) -> &DMatrix<f64> {
        self.0.as_mat()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn inverse(&self) -> Self {
        let m = self.as_mat();
        if m.nrows() == 2 {
            // adjugate; exact for det = 1
            let inv = DMatrix::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]]);
            return Self::from_mat_unchecked(inv);
        }
        let inv = m
            .clone()
            .try_inverse()
            .expect("determinant one matrices are invertible");
        Self::from_mat_unchecked(inv)
    }

    pub fn neg(&self) -> Self {
        Self::from_mat_unchecked(-self.as_mat())
    }

    /// `x⁻¹ · self · x`
    pub fn conjugate_by(&self, x: &GroupElement) -> Self {
        &(&x.inverse() * self) * x
    }

    /// `Ad(g) X = g X g⁻¹`
    pub fn adjoint(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::from_mat_unchecked(self.as_mat() * x.as_mat() * self.inverse().as_mat())
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.as_mat() - other.as_mat()).amax()
    }
}

impl Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        GroupElement::from_mat_unchecked(self.as_mat() * rhs.as_mat())
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: GroupElement) -> GroupElement {
        &self * &rhs
    }
}
