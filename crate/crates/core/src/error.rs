use thiserror::Error;

use crate::weights::Partition;

/// Domain failures of the Brauer corollary, kept apart so callers can tell them apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BrauerDomainError {
    #[error("r - |lambda| and r - |mu| must be even and nonnegative")]
    Parity,
    #[error("lambda must be nonempty when r is even and delta = 0")]
    EmptyAtZeroDelta,
    #[error("lambda_1 + l(lambda) must not exceed p")]
    HookTooLarge,
    #[error("r must be positive")]
    NonPositiveRank,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group context: {0}")]
    InvalidContext(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed partition `{0}`")]
    Parse(String),
    #[error("no decomposition row available for {0}")]
    UnresolvedLabel(Partition),
    #[error("cannot combine characters in different bases")]
    BasisMismatch,
    #[error("diagrams are not comparable: {0}")]
    NotComparable(String),
    #[error("oracle inconsistency: {0}")]
    OracleInconsistency(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("brauer: {0}")]
    Brauer(#[from] BrauerDomainError),
    #[error("arithmetic overflow")]
    Overflow,
}

impl Error {
    /// True for failures that indicate a bug or a falsified assumption rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_) | Error::OracleInconsistency(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
