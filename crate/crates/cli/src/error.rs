use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input; the message carries line and column.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] fiducial::Error),
}

impl CliError {
    pub fn parse(path: impl Into<String>, err: serde_json::Error) -> Self {
        CliError::Parse {
            path: path.into(),
            message: err.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for usage and parse problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Model(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
