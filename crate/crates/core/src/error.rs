use thiserror::Error;

use crate::characters::Family;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `f = 0` gives Sz(2), which is not simple.
    #[error("field parameter f must be at least 1 (got {0})")]
    InvalidField(u32),

    #[error("{divisor} does not divide {value}")]
    NotADivisor { divisor: u64, value: u64 },

    #[error("{divisor} is not a proper divisor of {value}")]
    NotProperDivisor { divisor: u64, value: u64 },

    #[error("exhaustive enumeration refused for f = {f}; the oracle budget is f <= {max}")]
    BudgetExceeded { f: u32, max: u32 },

    #[error("cyclotomic orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("{k}^2 is not congruent to -1 modulo {n}")]
    NotSquareRootOfMinusOne { k: i64, n: u64 },

    #[error("index {index} is not a valid {family} index")]
    InvalidIndex { family: Family, index: String },

    #[error("family {0} has no torus parameterization")]
    NoTorus(Family),

    #[error("torus order {0} is too large for exact cyclotomic evaluation")]
    TorusTooLarge(String),

    #[error("mismatched term lists: {exponents} exponents, {signs} signs")]
    LengthMismatch { exponents: usize, signs: usize },

    #[error("closed form disagrees with oracle: {0}")]
    Inconsistent(String),
}
