use thiserror::Error;

use crate::textparse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engines can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),

    #[error("invalid membership triple: {0}")]
    InvalidMembership(String),

    #[error("operation requires a non-empty set")]
    EmptySet,

    #[error("division by a set containing zero: {0}")]
    DivisionBySetContainingZero(String),

    #[error("product I{0}*I{1} of distinct subindeterminacies is undefined")]
    UndefinedSubindeterminacyProduct(u32, u32),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("indeterminate or zero denominator: {0}")]
    IndeterminateDenominator(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not supported: {0}")]
    NotSupported(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("overlapping piece domains: {0}")]
    Overlap(String),

    #[error("interval parameter is not monotone: {0}")]
    NonMonotoneParameter(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
