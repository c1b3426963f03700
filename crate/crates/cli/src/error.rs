use std::fmt;

use ballmaps_core::rescaling::StageError;
use ballmaps_core::Error;

/// Exit codes: 0 success, 2 validation, 3 numeric failure, 4 diagnostic.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Stage(StageError),
    /// Bad flags or unreadable input.
    Usage(String),
    /// A check ran and rejected its input.
    Rejected(String),
    Output(String),
}

fn core_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::Numeric(_) | Error::Pattern { .. } => 3,
        Error::Diagnostic(_) | Error::InfiniteDistance(_) => 4,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => core_code(e),
            CliError::Stage(s) => core_code(&s.error),
            CliError::Usage(_) | CliError::Rejected(_) => 2,
            CliError::Output(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Stage(e) => write!(f, "{e}"),
            CliError::Usage(s) | CliError::Rejected(s) | CliError::Output(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<StageError> for CliError {
    fn from(e: StageError) -> Self {
        CliError::Stage(e)
    }
}
