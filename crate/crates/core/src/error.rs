use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:e} exceeds {tolerance:e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("state is not physical: {0}")]
    Unphysical(String),

    #[error("quadrature error: {0}")]
    Quadrature(String),

    #[error("unknown sweep axis `{0}` (expected lambda, delta_m, delta_o or r)")]
    UnknownAxis(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Validation { .. } | Error::UnknownAxis(_) => 1,
            Error::Io { .. } => 3,
            Error::NotHermitian { .. }
            | Error::Domain(_)
            | Error::Unphysical(_)
            | Error::Quadrature(_) => 2,
        }
    }
}
