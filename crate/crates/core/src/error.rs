use thiserror::Error;

/// Errors raised across slopekit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{p} is not prime, divisor {divisor}")]
    NotPrime { p: u64, divisor: u64 },

    #[error("prime {p} exceeds the small-prime cap {cap}")]
    PrimeTooLarge { p: u64, cap: u64 },

    #[error("field of order {p}^{abs_degree} does not fit 64-bit element encodings")]
    FieldTooLarge { p: u32, abs_degree: usize },

    #[error("operands belong to different field contexts")]
    ContextMismatch,

    #[error("zero has no multiplicative inverse")]
    InverseOfZero,

    #[error("malformed element: {0}")]
    MalformedElement(String),

    #[error("{g} does not divide the absolute degree {m}")]
    DegreeMismatch { g: usize, m: usize },

    #[error("{what} needs {required} elements, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u64,
    },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("counting inconsistency at n={n}: {detail}")]
    CountingInconsistency { n: usize, detail: String },

    #[error("no slopes: the polygon has length 0 (genus 0)")]
    NoSlopes,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("enumeration guardrail exceeded: {0}")]
    Guardrail(String),
}

pub type Result<T> = std::result::Result<T, Error>;
