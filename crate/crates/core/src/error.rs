use thiserror::Error;

use crate::field::FieldError;
use crate::oracle::OracleError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("a^(q+1) != b^(q+1)")]
    NormMismatch,
    #[error("av = bu")]
    DegenerateAB,
    #[error("g({x}) = {value} does not lie in the subfield")]
    ValueNotInSubfield { x: u32, value: u32 },
    #[error("m = {m} is outside 1..={max}")]
    MOutOfRange { m: u64, max: u64 },
    #[error("exponent {0} is not an integer for this q")]
    IndivisibleExponent(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("leading coefficient is zero")]
    LeadingZero,
    #[error("degree {0} exceeds 5")]
    DegreeTooHigh(usize),
    #[error("no inverse-table row matches")]
    NoMatchingRow,
    #[error("inverse-table row {0} failed its composition check")]
    RowFailedVerification(&'static str),
    #[error("linearized binomial is not a permutation")]
    NotAPermutation,
    #[error("map is not injective")]
    NotInjective,
    #[error("map is not 2-to-1 (valid m: {valid_ms:?})")]
    NotTwoToOne { valid_ms: Vec<u64> },
    #[error("fibers of g are not translates of a fixed element")]
    FibersNotTranslations,
    #[error("no translation involution of g exists")]
    NoTranslationInvolution,
    #[error("operation requires characteristic 2")]
    WrongCharacteristic,
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidSpec(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
