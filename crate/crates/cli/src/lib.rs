//! Library side of the command-line tool: command implementations, exit-code
//! mapping and the experiment runner. The binary in `main.rs` only parses
//! arguments and dispatches here, so everything is testable in-process.

pub mod commands;
pub mod experiment;

use std::fmt;

/// Process exit codes, kept stable for scripting.
pub mod exit_codes {
    pub const OK: i32 = 0;
    /// No valid assignment exists (or the heuristic got stuck on an
    /// infeasible-looking instance).
    pub const INFEASIBLE: i32 = 2;
    /// Search budget exhausted; an incumbent file is still written if one
    /// was found.
    pub const BUDGET: i32 = 3;
    /// Solver preconditions violated (greedy stuck, foreign edges, missing
    /// weights, oracle cap).
    pub const PRECONDITION: i32 = 4;
    /// I/O or format error.
    pub const IO_FORMAT: i32 = 5;
}

/// An error carrying its exit code and a human-readable message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    pub fn io_format(message: impl fmt::Display) -> Self {
        Self::new(exit_codes::IO_FORMAT, message.to_string())
    }

    pub fn precondition(message: impl fmt::Display) -> Self {
        Self::new(exit_codes::PRECONDITION, message.to_string())
    }

    pub fn infeasible(message: impl fmt::Display) -> Self {
        Self::new(exit_codes::INFEASIBLE, message.to_string())
    }

    pub fn budget(message: impl fmt::Display) -> Self {
        Self::new(exit_codes::BUDGET, message.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
