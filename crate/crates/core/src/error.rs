use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {z} lies outside the open unit disk")]
    OutsideDisk { z: Complex64 },

    #[error("radius {r} lies outside [0, 1)")]
    RadiusOutOfRange { r: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no sign change of the radius equation on a {cells}-cell grid over (0, 1)")]
    NoRootFound { cells: usize },

    #[error("no witness above 1 at r = {probe_r} (best value {best_value})")]
    NoWitness { probe_r: f64, best_value: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("function has nonzero constant coefficient |a0| = {modulus}")]
    NonZeroConstant { modulus: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
