use std::process::ExitCode;

use mhd_forms::Error as CoreError;
use thiserror::Error;

/// Exit statuses of the `mhd-forms` binary.
pub mod exit {
    pub const OK: u8 = 0;
    /// An identity or covariance check found a failure.
    pub const CHECK_FAILED: u8 = 1;
    /// The Picard iteration did not contract or did not converge.
    pub const NOT_CONTRACTING: u8 = 2;
    /// Bad configuration or command line (`EX_USAGE`).
    pub const USAGE: u8 = 64;
    /// Internal numerical failure (`EX_SOFTWARE`).
    pub const SOFTWARE: u8 = 70;
    /// Output could not be written (`EX_IOERR`).
    pub const IO: u8 = 74;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => exit::USAGE,
            CliError::Core(e) => match e {
                CoreError::NonContraction { .. } | CoreError::HorizonUnderflow { .. } => exit::NOT_CONTRACTING,
                CoreError::InvalidConfig(_)
                | CoreError::InvalidGrid(_)
                | CoreError::InvalidExponent(_)
                | CoreError::ExponentRelation { .. }
                | CoreError::InvalidTimeGrid(_)
                | CoreError::GridMismatch
                | CoreError::Format(_) => exit::USAGE,
                CoreError::Io(_) => exit::IO,
                _ => exit::SOFTWARE,
            },
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => exit::IO,
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}
