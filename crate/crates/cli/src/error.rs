use std::path::PathBuf;

use thiserror::Error;

/// Every failure maps onto one process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// An input file was read but its contents are not acceptable.
    #[error("{}: {message}", path.display())]
    Data { path: PathBuf, message: String },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Data { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Verify(_) => 3,
        }
    }

    pub fn data(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Data { path: path.into(), message: message.to_string() }
    }
}

/// Library errors raised while interpreting flags are usage errors.
impl From<kmask::Error> for CliError {
    fn from(e: kmask::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
