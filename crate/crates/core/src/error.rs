use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Inputs violate a parameter constraint (atom bound, node range, p range, ...).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Integrand produced a NaN or infinity at a quadrature node.
    #[error("non-finite integrand value {value} at node {location:?}")]
    NonFinite { value: f64, location: Vec<f64> },

    #[error("polynomial degree {needed} exceeds cap {cap}; raise the degree cap")]
    DegreeCap { needed: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::DimensionMismatch { .. } | Error::DegreeCap { .. }
        )
    }
}
