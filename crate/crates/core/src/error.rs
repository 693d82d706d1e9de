use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree overflow: {0} + {1} exceeds 7")]
    DegreeOverflow(usize, usize),
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("form is not transverse: |i_xi a| = {0:.3e}")]
    NotTransverse(f64),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("algebra mismatch between operands")]
    AlgebraMismatch,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("curvature is not self-dual: {0}")]
    NotSelfDual(String),
    #[error("curvature is not real: conjugation residual {0:.3e}")]
    NotReal(f64),
    #[error("zero covector")]
    ZeroCovector,
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
