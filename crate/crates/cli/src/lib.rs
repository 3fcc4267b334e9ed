//! Library side of the `conslaw` command-line tool: file formats, command
//! implementations and report rendering.

pub mod commands;
pub mod files;
pub mod report;

use conslaw_core::noether::NoetherError;
use conslaw_core::numeric::NumericError;
use thiserror::Error;

pub use files::{parse_generators, Candidate, FileError, MetricFile};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const CHECK_FAILED: i32 = 2;
    pub const SOLVER: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    File(#[from] FileError),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Solver(#[from] NoetherError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::File(_) | CliError::Input(_) => exit::PARSE,
            CliError::Solver(_) => exit::SOLVER,
            CliError::Numeric(NumericError::InvalidInput(_)) => exit::PARSE,
            CliError::Numeric(NumericError::BlowUp { .. } | NumericError::Eval(_)) => exit::CHECK_FAILED,
            CliError::Numeric(_) => exit::SOLVER,
        }
    }
}
