//! Error-to-exit-code mapping for the command-line surface.
//!
//! Contract: 0 success (including empty results, with a warning on
//! stderr), 1 usage error, 2 input/parse error, 3 numeric error.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag values. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or invalid input data. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// A numeric routine could not meet its tolerance. Exit code 3.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<crate::ingest::IngestError> for CliError {
    fn from(e: crate::ingest::IngestError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Core errors caused by flag values are usage errors; numeric failures
/// keep their own exit code.
pub(crate) fn core_usage(e: cvrisk_core::Error) -> CliError {
    match e {
        cvrisk_core::Error::Numeric { .. } => CliError::Numeric(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

/// Core errors caused by loaded data are input errors; numeric failures
/// keep their own exit code.
pub(crate) fn core_input(e: cvrisk_core::Error) -> CliError {
    match e {
        cvrisk_core::Error::Numeric { .. } => CliError::Numeric(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}
