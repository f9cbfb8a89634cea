use std::path::Path;

use kgforge_core::stages::StageError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Stage(#[from] StageError),
    /// The agent's output was rejected by a check the user can relax.
    #[error("{0}")]
    Rejected(String),
    /// Input data failed validation.
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Stage(_) | CliError::Invalid(_) => 2,
            CliError::Rejected(_) => 3,
        }
    }
}
