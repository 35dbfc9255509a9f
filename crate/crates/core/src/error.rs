use num_bigint::{BigInt, BigUint};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: Q(sqrt({0})) vs Q(sqrt({1}))")]
    FieldMismatch(BigInt, BigInt),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("expanded form has non-integral coefficients")]
    NotIntegral,
    #[error("degenerate linear factors: {0}")]
    Degenerate(String),
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("precision budget of {bits} bits exhausted: {what}")]
    PrecisionExhausted { bits: u32, what: String },
    #[error("factorization budget exceeded; found {found:?}, unfactored cofactor {cofactor}")]
    FactorizationBudget { found: Vec<BigUint>, cofactor: BigUint },
    #[error("parse error: {0}")]
    Parse(String),
}
