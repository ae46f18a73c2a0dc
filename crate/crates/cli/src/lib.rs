//! File formats and error plumbing behind the `qprod` binary.

use std::fmt;

use qprod::Error as CoreError;

pub mod report;
pub mod statefile;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(CoreError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 2 for usage/validation problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Numerical(_)
                | CoreError::DegenerateFactor(_)
                | CoreError::Inconsistency(_) => 3,
                _ => 2,
            },
        }
    }
}
