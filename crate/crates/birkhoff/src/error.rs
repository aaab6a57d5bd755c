use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested zero pattern kills every vertex of the polytope.
    #[error("empty face: no permutation avoids the zero pattern")]
    EmptyFace,

    /// A denominator 1 - z^b vanished while evaluating the generating function.
    #[error("pole encountered: a factor 1 - z^b vanished at the given point")]
    PoleEncountered,

    /// An exactness check failed; this always indicates a bug, never bad input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
