use std::fmt;
use std::process::ExitCode;

/// A failure that ends the run, tagged with its exit status.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input or arguments. Exit 2.
    Schema(String),
    /// The engine could not produce a value. Exit 3.
    Solver(String),
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> CliError {
        CliError::Schema(message.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Schema(_) => ExitCode::from(2),
            CliError::Solver(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "invalid input: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
        }
    }
}

impl From<lossinfo::Error> for CliError {
    fn from(e: lossinfo::Error) -> CliError {
        CliError::Solver(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
