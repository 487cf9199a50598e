//! Error taxonomy mapped onto stable exit codes.

use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

/// Failures a command can report; each maps to one documented exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid arguments or configuration (exit 2, same as clap's own
    /// usage errors).
    #[error("{0}")]
    Usage(String),
    /// Missing, unreadable, or malformed inputs and outputs (exit 3).
    #[error("{0}")]
    Io(String),
    /// A solver reported a numerical failure (exit 4).
    #[error("solver failure: {0}")]
    Solver(sc2d_core::Error),
    /// A verification command found a violated invariant (exit 1).
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Solver(_) => 4,
        }
    }

    /// Wraps a filesystem error with the path that produced it.
    pub fn io_at(path: &std::path::Path, err: impl std::fmt::Display) -> CliError {
        CliError::Io(format!("{}: {}", path.display(), err))
    }
}

impl From<sc2d_core::Error> for CliError {
    fn from(err: sc2d_core::Error) -> Self {
        match err {
            sc2d_core::Error::InvalidConfig(msg) => CliError::Usage(msg.to_string()),
            other => CliError::Solver(other),
        }
    }
}
