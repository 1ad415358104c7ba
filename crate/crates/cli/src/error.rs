use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("engine error: {0}")]
    Engine(String),
}

impl CliError {
    /// 2 for configuration and I/O problems, 1 when an engine refuses its input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Engine(_) => 1,
        }
    }
}

impl From<cocycle_core::Error> for CliError {
    fn from(e: cocycle_core::Error) -> Self {
        CliError::Engine(e.to_string())
    }
}

impl From<cocycle_loop::LoopError> for CliError {
    fn from(e: cocycle_loop::LoopError) -> Self {
        match e {
            cocycle_loop::LoopError::GridTooSmall { .. } | cocycle_loop::LoopError::Config(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Engine(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
