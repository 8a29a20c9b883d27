use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),

    #[error("numerical failure: {0}")]
    Numerical(#[from] revival::Error),
}

impl CliError {
    /// 1 for configuration or I/O problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
