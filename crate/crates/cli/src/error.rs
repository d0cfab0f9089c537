use std::fmt;
use std::process::ExitCode;

/// Failure classes of the command-line tool, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Accuracy(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Accuracy(_) => 3,
            CliError::Io(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Accuracy(m) => write!(f, "accuracy failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<mch_core::Error> for CliError {
    fn from(e: mch_core::Error) -> Self {
        use mch_core::Error as E;
        match e {
            E::Domain(_) | E::Sector { .. } | E::Table(_) => CliError::Usage(e.to_string()),
            E::Singular(_) | E::Accuracy { .. } | E::Contract(_) | E::Integration { .. } | E::InsufficientData(_) => {
                CliError::Accuracy(e.to_string())
            }
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
