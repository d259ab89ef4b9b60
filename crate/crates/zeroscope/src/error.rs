//! Error type shared by every module of the crate.

/// Errors produced by the numerical and exact-arithmetic routines.
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the mathematical domain of an operation failed.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request exceeds a configured memory or size budget.
    #[error("resource error: {0}")]
    Resource(String),

    /// An iterative numerical scheme failed to converge or lost precision.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The argument is outside the range covered by the precision policy.
    #[error("range error: {0}")]
    Range(String),

    /// Sign-change count and winding count disagree after refinement.
    /// `offline_suspected` is set when the winding count exceeds the number
    /// of sign changes, i.e. the rectangle contains zeros the critical-line
    /// scan cannot see.
    #[error("completeness error: q={q} char={char_id}: {sign_changes} sign changes vs winding {winding} (offline zero suspected: {offline_suspected})")]
    Completeness {
        q: u64,
        char_id: String,
        sign_changes: usize,
        winding: i64,
        offline_suspected: bool,
    },

    /// An exact constraint system is infeasible where it must not be.
    #[error("inconsistency error: {0}")]
    Inconsistent(String),

    /// An exact decision procedure could not reach a verdict.
    #[error("indeterminate: {0}")]
    Indeterminate(String),

    /// A guaranteed-total classification failed; indicates a bug, not bad input.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
