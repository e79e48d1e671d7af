use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum RcrError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("undefined result: {0}")]
    UndefinedResult(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl RcrError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        RcrError::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        RcrError::Config(msg.into())
    }

    /// Whether the error stems from bad user input rather than a runtime failure.
    pub fn is_configuration(&self) -> bool {
        matches!(
            self,
            RcrError::Config(_) | RcrError::InvalidArgument(_) | RcrError::Parse { .. }
        )
    }
}

pub type Result<T, E = RcrError> = std::result::Result<T, E>;
