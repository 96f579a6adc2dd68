use thiserror::Error;

use crate::structure::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Tables or order have the wrong dimensions, or an entry is out of range.
    #[error("malformed structure: {0}")]
    Shape(String),

    #[error("element {element} out of range for a carrier of size {n}")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("structure violates its axioms: {0}")]
    Invalid(ValidationReport),

    #[error("{op} requires an associative structure (kind = semigroup)")]
    RequiresSemigroup { op: &'static str },

    #[error("{op} is limited to {what} <= {limit}, got {got}")]
    TooLarge {
        op: &'static str,
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("filter closure needs a nonempty seed")]
    EmptySeed,

    #[error("partition is not a semilattice congruence: {0}")]
    NotSemilatticeCongruence(String),

    #[error("partition has {got} entries, structure has {n} elements")]
    PartitionShape { got: usize, n: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("generation budget exhausted after {0} search nodes")]
    BudgetExhausted(usize),

    #[error("unknown claim id `{0}`")]
    UnknownClaim(String),

    /// An internal consistency check failed. Always a bug.
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
