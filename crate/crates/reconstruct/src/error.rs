use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("handle is not in A (indecomposable with uniquely decomposable double)")]
    NotInA,

    #[error("expected exactly two companions, found {0}")]
    CompanionCount(usize),

    #[error("{0} search did not terminate within its cap")]
    UnboundedSearch(&'static str),

    #[error("chain is not a path: {0}")]
    NotAPath(String),

    #[error("label chain is not a palindrome around the centre")]
    NotPalindrome,

    #[error("only {observed} labels observed, a period of {period} needs {needed}")]
    TooFewRepetitions {
        observed: usize,
        period: usize,
        needed: usize,
    },

    #[error("label period {0:?} does not come from a real quadratic field")]
    InvalidPeriod(Vec<u64>),

    #[error("gave up after extending the chain to radius {0}")]
    EscalationExhausted(usize),
}

impl ReconstructError {
    /// Errors that a longer chain may resolve.
    pub fn is_retriable(&self) -> bool {
        matches!(
            self,
            ReconstructError::TooFewRepetitions { .. } | ReconstructError::InvalidPeriod(_)
        )
    }
}

pub type Result<T, E = ReconstructError> = std::result::Result<T, E>;
