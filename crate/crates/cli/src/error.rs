use thiserror::Error;

use tfq_core::TfqError;

/// Everything that ends a run before a report is produced. All of these map
/// to exit code 2; tolerance failures are not errors.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Input(String),

    #[error(transparent)]
    Core(#[from] TfqError),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
