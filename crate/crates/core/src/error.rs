use thiserror::Error;

/// Errors produced by the estimators, the variance theory and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("lag range: {0}")]
    Range(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("non-Gaussian model requires an explicit fourth-order cumulant kernel")]
    MissingCumulant,

    #[error("kernel tail has not decayed at lag {lag}: |f|+|g| = {tail:e} exceeds {tolerance:e}")]
    Truncation { lag: usize, tail: f64, tolerance: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn dimension(msg: impl Into<String>) -> Error {
    Error::Dimension(msg.into())
}
