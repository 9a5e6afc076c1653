use std::path::{Path, PathBuf};

use pullback_lab::LabError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Lab(#[from] LabError),

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} acceptance criteria failed")]
    Verify { failed: usize, total: usize },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 configuration/validation, 3 convergence, 4 I/O, 1 failed verification.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Lab(LabError::Convergence { .. }) => 3,
            CliError::Lab(_) => 2,
            CliError::Io { .. } => 4,
            CliError::Verify { .. } => 1,
        }
    }
}
