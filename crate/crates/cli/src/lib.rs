//! Library surface of the CLI: configs, report envelope, and command
//! implementations, shared by the binary and the integration tests.

pub mod commands;
pub mod config;
pub mod report;

#[derive(Debug)]
pub enum CliError {
    /// Configuration or usage problem (exit 2).
    Config(String),
    /// Failure at run time (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn config_from(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }

    pub fn runtime_msg(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }
}
