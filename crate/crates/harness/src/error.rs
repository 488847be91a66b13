use std::path::PathBuf;

use thiserror::Error;
use zakharov_core::ZakharovError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(#[from] ZakharovError),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("invariant check failed: {0}")]
    Invariant(String),
}

impl HarnessError {
    /// Process exit code: 2 configuration, 3 solver failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Solver(ZakharovError::Config(_) | ZakharovError::Truncation { .. }) => 2,
            HarnessError::Solver(_) | HarnessError::Invariant(_) => 3,
            HarnessError::Io { .. } | HarnessError::Csv { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
