use std::path::PathBuf;

use thiserror::Error;

/// Harness failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("replayed results differ from the recorded payload")]
    ReplayMismatch,
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl From<repliq_core::Error> for CliError {
    fn from(err: repliq_core::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::ReplayMismatch => 4,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Parse { .. } => "parse",
            CliError::ReplayMismatch => "replay",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
        }
    }

    /// Single-line `error[kind]: message` for the standard error stream.
    pub fn one_line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.kind(), msg)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
