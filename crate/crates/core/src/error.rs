use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator count {0} exceeds the supported maximum of {max}", max = crate::clifford::MAX_GENERATORS)]
    TooManyGenerators(usize),

    #[error("algebra mismatch: left operand has {left} generators, right operand has {right}")]
    AlgebraMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("multivector is not invertible (condition estimate {condition:e} exceeds {threshold:e})")]
    Singular { condition: f64, threshold: f64 },

    #[error("point is not on the unit sphere: |xi| = {norm}")]
    NotOnSphere { norm: f64 },

    #[error("point is not inside the unit ball: |x| = {norm}")]
    NotInBall { norm: f64 },

    #[error("too close to the boundary: 1 - |x| = {gap:e} is below {min_gap:e}")]
    NearBoundary { gap: f64, min_gap: f64 },

    #[error("precondition violated for {check}: {reason}")]
    Precondition { check: &'static str, reason: String },

    #[error("dimension n = {n} is not supported by {check}")]
    UnsupportedDimension { check: &'static str, n: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
