use std::fmt;
use std::path::Path;

/// Failures that map onto the process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: flags, config file contents or library validation. Exit 2.
    Validation(String),
    /// Reading or writing files failed. Exit 3.
    Io(String),
    /// The invariant suite ran and at least one check failed. Exit 1.
    CheckFailed(usize),
    /// A computation produced a non-finite sample. Exit 1.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) | CliError::Numeric(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::CheckFailed(n) => write!(f, "{n} check(s) failed"),
            CliError::Numeric(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<wavespin::Error> for CliError {
    fn from(e: wavespin::Error) -> Self {
        match e {
            wavespin::Error::NonFinite { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
