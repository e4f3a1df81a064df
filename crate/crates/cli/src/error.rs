//! CLI error classification and exit codes.
//!
//! 2 = usage error, 3 = data error, 4 = empty candidate family, 1 = anything
//! else. Every failure prints a single machine-parsable line on stderr.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
    #[error("empty-family: {0}")]
    EmptyFamily(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::EmptyFamily(_) => 4,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<boundkde::Error> for CliError {
    fn from(e: boundkde::Error) -> Self {
        use boundkde::Error as E;
        match &e {
            E::EmptyFamily { .. } => CliError::EmptyFamily(e.to_string()),
            E::OutOfDomain { .. } | E::EmptySample | E::DimensionMismatch { .. } => {
                CliError::Data(e.to_string())
            }
            E::InvalidConfig(_)
            | E::OrderTooLarge { .. }
            | E::InvalidBandwidth { .. }
            | E::InvalidAmplitude { .. }
            | E::InsufficientPoints(_) => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
