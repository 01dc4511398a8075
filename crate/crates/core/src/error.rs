use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: degree {left} vs degree {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("wrong case: {0}")]
    WrongCase(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible cover: {uncovered} target elements have no candidate")]
    Infeasible { uncovered: usize, residual: Vec<usize> },
    #[error("lower bound violation: {0}")]
    Violation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
