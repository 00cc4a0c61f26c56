use thiserror::Error;

use crate::poly::Context;

/// Errors raised by the algebra, invariant and index-set layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime (only odd characteristic is supported)")]
    InvalidPrime(u64),
    #[error("variable count n = {n} is outside 1..={max}")]
    InvalidVariableCount { n: usize, max: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(Context, Context),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor has exterior content")]
    DivisorHasExterior,
    #[error("not exactly divisible")]
    NotDivisible,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unknown identity id '{0}'")]
    UnknownIdentity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
