use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the numerical routines.
///
/// Every public operation returns one of these instead of letting a NaN or
/// infinity escape, so callers can tell an evaluation failure apart from a
/// disagreement between two finite numbers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at x = {0}")]
    Pole(f64),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("underflow: {0}")]
    Underflow(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vanishing denominator Pochhammer symbol: {0}")]
    VanishingDenominator(String),
    #[error("series not converged after {terms} diagonals")]
    NotConverged { terms: usize },
    #[error("accuracy degraded: |z| = {modulus} exceeds the supported disc |z| <= {limit}")]
    AccuracyDegraded { modulus: f64, limit: f64 },
    #[error("precision loss: cancellation ratio {ratio:e}")]
    PrecisionLoss { ratio: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
