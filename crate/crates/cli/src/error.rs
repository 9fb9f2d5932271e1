use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input. Exit code 1.
    #[error("{0}")]
    Input(String),
    /// Solver or quadrature failure. Exit code 2.
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    /// Wraps a library error, keeping its class and naming where it came from.
    pub fn from_lib(context: &str, err: debranges::Error) -> Self {
        let message = format!("{context}: {err}");
        if err.is_numerical() {
            CliError::Numerical(message)
        } else {
            CliError::Input(message)
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
