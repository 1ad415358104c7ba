use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("multiplication is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("2-cochain fails the cocycle identity at ({0}, {1}, {2})")]
    CocycleFailure(usize, usize, usize),
    #[error("compatibility C|_N = -dLambda fails at ({0}, {1})")]
    Compatibility(usize, usize),
    #[error("normal subgroup is not central")]
    NotCentral,
    #[error("coefficient module {0} is not cyclic")]
    NonCyclicCoefficients(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
