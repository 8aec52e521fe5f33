use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("log-profile is not concave (quadratic coefficient {quadratic:e}); distribution is not Gaussian")]
    NotGaussian { quadratic: f64 },

    #[error("only {found} sites above the support threshold, need at least {needed}")]
    InsufficientSupport { found: usize, needed: usize },

    #[error("no spectral peak above {threshold}x median power (best ratio {sharpness:.3})")]
    NoOscillation { sharpness: f64, threshold: f64 },

    #[error("dense operators are limited to d <= {max}, got d = {d}")]
    TooLarge { d: usize, max: usize },

    #[error("operator dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
