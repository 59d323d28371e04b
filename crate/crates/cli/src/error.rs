use std::fmt;

use boole_core::Error;

/// A failure mapped onto the stable exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input or arguments (exit 2).
    Input(String),
    /// A configured limit or unsupported configuration (exit 3).
    Limit(String),
    /// A well-formed request the mathematics rejects (exit 4).
    Domain(String),
    /// Output could not be written (exit 1).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
            CliError::Domain(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Limit(m) => write!(f, "limit error: {m}"),
            CliError::Domain(m) => write!(f, "domain error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::EventLimitExceeded { .. }
            | Error::SizeLimitExceeded(_)
            | Error::KTooLarge { .. }
            | Error::EmptyTicketSet
            | Error::UnsupportedScenario(_) => CliError::Limit(msg),
            Error::NotInElliptope(..) | Error::ZeroVariance(_) | Error::EmptyRegion => {
                CliError::Domain(msg)
            }
            _ => CliError::Input(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
