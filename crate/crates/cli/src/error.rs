use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{origin}: line {line}: {message}")]
    Parse { origin: String, line: usize, message: String },

    #[error("{origin}: field `{field}`: {message}")]
    Field { origin: String, field: String, message: String },

    #[error("numerical failure: {0}")]
    Numerical(#[from] sobofit::Error),
}

impl CliError {
    /// 1 for usage, I/O and parse problems; 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
