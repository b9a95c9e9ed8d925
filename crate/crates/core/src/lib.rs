//! Numerical verification of regularized traces and fixed-point character
//! formulas on desk-scale models of Riemannian symmetric spaces.
//!
//! * [`lie_structure`]: structure theory and parabolic data for `sl(n, R)`.
//! * [`fixed_points`]: fixed points of left translations on `G/H` and the
//!   determinant identity relating chart Jacobians to the isotropy action.
//! * [`sphere`]: the rank-one compactification of `SL(2,R)/SO(2)` as the
//!   Riemann sphere, with charts, weights and fixed points.
//! * [`haar`]: Iwasawa coordinates, validated Haar quadrature and test
//!   functions on `SL(2,R)`.
//! * [`trace`]: both sides of the character formula.
//! * [`finite_part`]: the meromorphic continuation of `∫|t|^s φ(t) dt`.

pub mod error;
pub mod finite_part;
pub mod fixed_points;
pub mod haar;
pub mod lie_structure;
pub mod matrix;
pub mod quadrature;
pub mod sphere;
pub mod trace;

pub use error::{Error, Result};
pub use matrix::{AlgebraElement, GroupElement, SquareMatrix};
