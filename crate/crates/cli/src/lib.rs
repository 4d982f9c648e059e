//! Batch front end for the tormod engine: session configs, commands, JSON
//! reports, ASCII charts and a content-addressed resolution cache.

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Engine(#[from] tormod::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.is_window() => EXIT_WINDOW,
            CliError::Engine(e) if e.is_invariant() => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Engine(e) if e.is_window() => "window",
            CliError::Engine(e) if e.is_invariant() => "internal",
            CliError::Engine(_) => "validation",
        }
    }
}
