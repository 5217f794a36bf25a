//! The field tower F_p ⊂ F_q ⊂ F_{q^2} and the primitives the
//! classification theorems consume.

mod dlog;
pub(crate) mod fp_poly;
mod gf;
mod tower;

pub use dlog::baby_step_giant_step;
pub use gf::{FieldElement, Fe, Gf, FF2, FFq, DEFAULT_SIZE_CAP};
pub(crate) use gf::gcd;
pub use tower::{abs_trace, quad_char, FieldCtx, FieldSpec};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field of order {order} exceeds the size cap {cap}")]
    SizeCapExceeded { order: u128, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("discrete logarithm of zero or to base zero")]
    ZeroInput,
    #[error("operation requires characteristic 2")]
    WrongCharacteristic,
    #[error("quadratic character requires odd characteristic")]
    EvenCharacteristic,
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("coefficient {value} is not reduced modulo {p}")]
    CoefficientOutOfRange { value: u32, p: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("field description does not match the constructed field: {0}")]
    SpecMismatch(String),
}
