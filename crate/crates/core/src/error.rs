use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("relation contains a cycle through `{0}`")]
    CycleDetected(String),

    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("enumeration guard exceeded: {what} = {found} > {limit}")]
    EnumerationGuard {
        what: &'static str,
        limit: usize,
        found: usize,
    },

    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },

    #[error("series mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("operation requires the generating poset of the series")]
    MissingProvenance,

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot reach {requested} digits: {reason}")]
    PrecisionUnachievable { requested: u32, reason: String },

    #[error("divergent parameter: {0}")]
    DivergentParameter(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
