use std::path::PathBuf;

use kuznetsov::experiments::ExperimentError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Help or version text requested; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("invalid value for {field}: {reason}")]
    InvalidValue { field: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

impl CliError {
    pub(crate) fn invalid(field: &str, reason: impl ToString) -> Self {
        Self::InvalidValue {
            field: field.to_string(),
            reason: reason.to_string(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// `0` help, `1` I/O, `2` usage or invalid input, `3` numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Info(_) => 0,
            Self::Io { .. } => 1,
            Self::Usage(_) | Self::InvalidValue { .. } => 2,
            Self::Experiment(
                ExperimentError::InvalidInput { .. } | ExperimentError::InvalidLadder(_),
            ) => 2,
            Self::Experiment(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
