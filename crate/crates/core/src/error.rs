use thiserror::Error;

use crate::network::DeviceKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{kind} index {index} out of range for pool of size {pool}")]
    PoolBounds {
        kind: DeviceKind,
        index: usize,
        pool: usize,
    },

    #[error("duplicate {kind} index {index}")]
    DuplicateIndex { kind: DeviceKind, index: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("{0}")]
    Domain(String),

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("problem too large: {what} = {count} exceeds limit {limit}")]
    Size {
        what: &'static str,
        count: u128,
        limit: u128,
    },

    #[error("infeasible architecture: {0}")]
    Infeasible(String),
}

impl Error {
    pub(crate) fn dim(context: &'static str, expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
