//! Error classification for exit codes: configuration and flag problems are
//! usage errors (exit 2), everything the data did wrong is a domain error
//! (exit 1).

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// The invocation itself is wrong: bad flag combination, malformed or
    /// invalid configuration. Nothing has been written when this is raised.
    Usage(String),
    /// The inputs are wrong or unreadable: missing files, malformed formats,
    /// mismatched frame sets.
    Domain(lpcg::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Domain(err) => write!(f, "{err}"),
        }
    }
}

impl From<lpcg::Error> for CliError {
    fn from(err: lpcg::Error) -> Self {
        match err {
            lpcg::Error::InvalidConfig(msg) => CliError::Usage(format!("invalid config: {msg}")),
            other => CliError::Domain(other),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;
