use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation (non-positive time,
    /// empty window, evaluation at an undefined point, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A hypothesis gate that the datum does not satisfy.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("config error at line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command-line surface: 2 for configuration
    /// problems, 3 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Solver(_) => 3,
            _ => 2,
        }
    }
}
