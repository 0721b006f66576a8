use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Elliptic modulus outside the supported range `[0, 1)`.
    #[error("elliptic modulus k = {0} outside [0, 1)")]
    ModulusOutOfRange(f64),

    /// The angle chart degenerates at beta = ±pi/2 (sec/tan blow up).
    #[error("chart singularity: beta = {0} rad is within the ±pi/2 band")]
    ChartSingularity(f64),

    /// The angles backend reached the beta = ±pi/2 band mid-integration.
    #[error("chart singularity at t = {t}: beta = {beta} rad reached the ±pi/2 band")]
    ChartSingularityAt { t: f64, beta: f64 },

    /// Only the u6 = 0 momentum slice is supported.
    #[error("u6 component must be zero (got {0})")]
    NonzeroU6(f64),

    /// Malformed argument (non-finite values, bad sample counts, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
