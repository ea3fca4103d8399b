use thiserror::Error;

use crate::ring::RingSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),

    #[error("element {0} is not a unit")]
    NotUnit(u64),

    #[error("operation undefined on the zero element")]
    ZeroElement,

    #[error("invalid partition {0:?}: {1}")]
    InvalidPartition(Vec<u32>, String),

    #[error("coordinate {index} = {value} is not reduced modulo p^{exponent}")]
    BadCoordinate { index: usize, value: u64, exponent: u32 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("module mismatch")]
    ModuleMismatch,

    #[error("invalid label: {0}")]
    InvalidLabel(String),

    #[error("submodule is not annihilated by p^{0}")]
    BoundViolation(u32),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a morphism: {0}")]
    NotAMorphism(String),

    #[error("cardinality cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: u128 },

    /// An internal consistency check failed; this signals a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistent(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}
