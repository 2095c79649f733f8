use thiserror::Error;

/// Errors produced by interval construction, sampling, and the simulation
/// harness.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The dataset is empty and the estimator is undefined.
    #[error("empty data: {0}")]
    EmptyData(&'static str),

    /// The dataset is nonempty but too small for the estimator.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A metric is undefined for the given counts.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// Importance weights or posterior draws degenerated to nothing usable.
    #[error("degenerate posterior: {0}")]
    DegeneratePosterior(String),

    /// A simulation or analysis configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Paired inputs have mismatched lengths.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
