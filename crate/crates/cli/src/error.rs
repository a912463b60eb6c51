use std::fmt;

/// Runner failures, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent configuration (exit code 2).
    Config(String),
    /// A requested output format the scenario cannot produce (exit code 2).
    UnsupportedFormat(String),
    /// A module rejected the input or a certificate failed (exit code 1).
    Computation(freedim_core::Error),
    /// The report could not be written (exit code 1).
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnsupportedFormat(_) => 2,
            CliError::Computation(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::UnsupportedFormat(m) => write!(f, "unsupported format: {m}"),
            CliError::Computation(e) => write!(f, "computation error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<freedim_core::Error> for CliError {
    fn from(e: freedim_core::Error) -> Self {
        match e {
            // malformed group or matrix input is a configuration problem
            freedim_core::Error::Parse(m) => CliError::Config(m),
            other => CliError::Computation(other),
        }
    }
}
