use thiserror::Error;

#[derive(Debug, Error)]
pub enum TfqError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),

    #[error("kernel table does not cover u = {u} (table spans [{lo}, {hi}])")]
    Extrapolation { u: f64, lo: f64, hi: f64 },

    #[error("fit needs at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("non-finite value encountered: {0}")]
    Numeric(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, TfqError>;

pub(crate) fn invalid(msg: impl Into<String>) -> TfqError {
    TfqError::InvalidArgument(msg.into())
}
