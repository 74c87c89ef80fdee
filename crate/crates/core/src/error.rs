use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid ray: {0}")]
    InvalidRay(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}: the exact engine handles dimension 2 only")]
    UnsupportedDimension(usize),

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    #[error("no divergence found for c up to {0}")]
    UnboundedThreshold(f64),

    #[error("nonfinite integrand at x = {x:?}")]
    NonFiniteIntegrand { x: Vec<f64> },

    #[error("profile already carries a log term; only one log level is supported")]
    NestedLogTerm,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
