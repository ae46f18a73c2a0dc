//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Matrix or vector shapes do not match the requested operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A numerical routine failed (non-finite input, no convergence).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A caller-side contract was violated (unsorted singular values,
    /// out-of-range tolerance, non-Hermitian input to a Hermitian routine).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A partition does not fit the state it is applied to, or is malformed.
    #[error("invalid partition: {0}")]
    Partition(String),

    /// Partition text did not match the grammar; `pos` is the byte offset
    /// into the input where the problem was detected.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A state failed density-matrix or pure-state validation.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A Schmidt factor had (numerically) zero trace, so trace normalization
    /// is impossible; the input is not a product state despite the rank test.
    #[error("degenerate factor: {0}")]
    DegenerateFactor(String),

    /// Two routes that must agree (semiproduct test vs. factor peeling)
    /// disagreed at the same tolerance; the input sits on the threshold.
    #[error("inconsistent verdicts: {0}")]
    Inconsistency(String),
}
