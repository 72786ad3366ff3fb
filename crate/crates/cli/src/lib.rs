//! Command-line front end: config loading, artifact plumbing, and the
//! subcommand implementations. The binary in `main.rs` is a thin clap
//! dispatcher over this library so integration tests can call commands
//! in-process.

pub mod artifacts;
pub mod commands;
pub mod config;

use rem_core::{DataError, FitError, SimError, StatError};

/// Errors surfaced to the shell, grouped by exit code:
/// usage/config problems exit 1, data problems exit 2, numerical
/// failures exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numeric(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

impl From<DataError> for CliError {
    fn from(e: DataError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<StatError> for CliError {
    fn from(e: StatError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<FitError> for CliError {
    fn from(e: FitError) -> CliError {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Data(format!("i/o error: {e}"))
    }
}

/// Size the global thread pool once per process. `threads == 0` keeps
/// rayon's default; repeated calls with the same value are harmless.
pub fn configure_threads(threads: usize) -> Result<(), CliError> {
    if threads == 0 {
        return Ok(());
    }
    match rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
    {
        Ok(()) => Ok(()),
        // the pool can only be built once; if it already matches, go on
        Err(_) if rayon::current_num_threads() == threads => Ok(()),
        Err(e) => Err(CliError::Usage(format!("cannot size thread pool: {e}"))),
    }
}
