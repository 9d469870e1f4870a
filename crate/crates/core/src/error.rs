use thiserror::Error;

/// Errors produced by the numerical kernels, scenario validation and output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A configuration or argument failed validation; `key` names the offending input.
    #[error("{key}: {message}")]
    Validation { key: String, message: String },

    /// An invariant that should hold by construction was breached numerically.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Process exit code for this class of failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. } | Error::InvalidState(_) => 1,
            Error::Dimension(_)
            | Error::NotHermitian { .. }
            | Error::NotPositive { .. }
            | Error::Numerical(_) => 2,
            Error::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
