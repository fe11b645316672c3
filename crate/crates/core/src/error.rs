//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by code construction, decoding and analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The message/rate-matched length pair lies outside the channel's valid range.
    #[error("({a}, {e}) is outside the valid range for this channel: {reason}")]
    OutOfRange { a: usize, e: usize, reason: &'static str },
    /// A configuration the standard defines but this crate does not implement.
    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    /// An SR node would need more repetition sequences than the decoder allows.
    #[error("SR node needs {needed} repetition sequences, budget is {budget}")]
    SequenceBudgetExceeded { needed: usize, budget: usize },
    #[error("sorter precondition violated: {0}")]
    SpecViolation(&'static str),
    #[error("LLR input has {actual} values but the code transmits {expected}")]
    ConfigMismatch { expected: usize, actual: usize },
    #[error("node type has no cycle-cost entry: {0}")]
    UnsupportedNode(&'static str),
    #[error("invalid decoder parameters: {0}")]
    InvalidParams(&'static str),
    /// The pattern has no SR decomposition within the given limits.
    #[error("node pattern is not SR-compatible")]
    NotSrCompatible,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
