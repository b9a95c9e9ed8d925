use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not traceless (trace = {0:e})")]
    NotTraceless(f64),
    #[error("matrix does not have determinant one (det = {0})")]
    NotUnimodular(f64),
    #[error("rank must be at least 2, got n = {0}")]
    RankTooSmall(usize),
    #[error("invalid root e_{0} - e_{1}")]
    InvalidRoot(usize, usize),
    #[error("theta subset contains a non-simple root e_{0} - e_{1}")]
    NotSimple(usize, usize),
    #[error("unsupported rank n = {0} for this operation")]
    UnsupportedRank(usize),
    #[error("element is not real-semisimple regular: {0}")]
    NotRealSemisimpleRegular(String),
    #[error("coset is not a fixed point (residual {0:e})")]
    NotAFixedPoint(f64),
    #[error("normal chart breaks down near the fixed point")]
    ChartBreakdown,
    #[error("element is central (g = +-1), every point is fixed")]
    CentralElement,
    #[error("point is outside the chart domain")]
    ChartDomain,
    #[error("point lies on the boundary orbit")]
    BoundaryPoint,
    #[error("support certification failed at (theta, s, u) = ({theta}, {s}, {u}): tr g = {trace}")]
    Certification { theta: f64, s: f64, u: f64, trace: f64 },
    #[error("haar density failed invariance validation (relative error {0:e})")]
    InvarianceValidation(f64),
    #[error("diagonal density does not vanish on the boundary of its support box ({0:e})")]
    DensitySupport(f64),
    #[error("s = {0} is outside the regime where the fixed-point side converges")]
    OutsideRegime(f64),
    #[error("element has a degenerate fixed point (|det(1 - dphi)| = {0:e})")]
    NonTransversal(f64),
    #[error("quadrature grid has not passed invariance validation")]
    UnvalidatedGrid,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
