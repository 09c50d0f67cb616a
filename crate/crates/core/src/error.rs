use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix violates the group invariants: {0}")]
    InvariantViolation(String),
    #[error("degenerate Iwasawa decomposition: {0}")]
    DegenerateDecomposition(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid A-interval: S = {s}, T = {t} (need 0 <= S <= T)")]
    InvalidInterval { s: f64, t: f64 },
    #[error("vector ({0}) is not primitive")]
    NotPrimitive(String),
    #[error("unsupported ring: d = {0} (Euclidean d in {{1, 2, 3, 7, 11}} only)")]
    UnsupportedRing(i64),
    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),
    #[error("height undefined: x0 - xn = {0} <= 0")]
    HeightUndefined(i64),
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("empty sample")]
    EmptySample,
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("quadrature failed to converge on [{lo}, {hi}]")]
    QuadratureFailure { lo: f64, hi: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("arithmetic overflow in exact computation")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
