use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field strength {0}: must be positive and finite")]
    InvalidField(f64),

    #[error("invalid mode index: {0}")]
    InvalidMode(String),

    #[error("value not representable: {0}")]
    Range(String),

    #[error("quadrature construction failed: {0}")]
    Quadrature(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("strict hyperbolicity violated: min a(t) = {a0} on [0, {horizon}]")]
    NotStrictlyHyperbolic { a0: f64, horizon: f64 },

    #[error("decay diagnostic unavailable: {0}")]
    DiagnosticUnavailable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
