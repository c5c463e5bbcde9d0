use thiserror::Error;

/// Errors raised across the solver pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("LengthMismatch: s1 has {left} characters but s2 has {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("NotPermutation: s2 is not a rearrangement of the characters of s1")]
    NotPermutation,

    #[error("NonPositiveWeight: {context} has weight {value}")]
    NonPositiveWeight { context: String, value: f64 },

    #[error("InvalidWeightSpec: {0}")]
    InvalidWeightSpec(String),

    #[error("TooLarge: {what} is {size}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("IterationLimit: simplex stopped after {0} pivots")]
    IterationLimit(u64),

    #[error("InconsistentSelection: {0}")]
    InconsistentSelection(String),

    #[error("InvalidMapping: {0}")]
    InvalidMapping(String),

    #[error("RelaxedInstance: {0} requires a strict (permutation) instance")]
    RelaxedInstance(&'static str),

    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
