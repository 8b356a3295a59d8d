//! Library side of the `rdiagram` command: document formats and subcommands.
//!
//! Exit codes: 0 success, 1 invalid mathematical input, 2 unreadable or malformed input,
//! 3 internal consistency failure.

pub mod commands;
pub mod input;
pub mod output;

use thiserror::Error;

use rdiagram_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal consistency failure: {message}")]
    Consistency { message: String, reproducer: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Consistency { .. } => 3,
        }
    }

    /// Errors that can only come from a bug become consistency failures; the rest blame
    /// the input.
    pub fn from_core(e: CoreError) -> Self {
        match e {
            CoreError::Consistency(_)
            | CoreError::Divisibility(_)
            | CoreError::Expression { .. }
            | CoreError::Hypothesis { .. }
            | CoreError::NotSeparated(_)
            | CoreError::InvalidRDiagram(_) => CliError::Consistency {
                message: e.to_string(),
                reproducer: String::new(),
            },
            other => CliError::Invalid(other.to_string()),
        }
    }
}
