use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoopError {
    #[error("map family is not relative to the boundary: {0}")]
    NotRelative(String),
    #[error("grid resolution {got} is below the minimum {min}")]
    GridTooSmall { got: usize, min: usize },
    #[error("logarithm undefined near -1 at {0}")]
    Antipode(String),
    #[error("diffeomorphism lift is not monotone at x = {0}")]
    NotMonotone(f64),
    #[error("invalid family: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, LoopError>;
