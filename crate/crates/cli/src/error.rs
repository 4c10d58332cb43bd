use std::path::PathBuf;

use cmzv_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("{failed} of {total} identities failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1: verification failure; 2: bad input; 3: precision failure;
    /// 4: no relation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed { .. } => 1,
            CliError::Core(e) => match e {
                CoreError::NoRelationFound(_) => 4,
                CoreError::PrecisionExhausted(_)
                | CoreError::QuadratureNonConvergent(_)
                | CoreError::PrecisionTooLow(_) => 3,
                _ => 2,
            },
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
