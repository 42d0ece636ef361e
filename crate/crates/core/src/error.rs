//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,
    #[error("residue is not a unit modulo the prime power")]
    NonUnitResidue,
    #[error("attempted to invert zero")]
    DivisionByZero,
    #[error("inversion hit a zero divisor; the cyclotomic modulus is reducible")]
    ZeroDivisor,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("fields belong to different towers or levels")]
    FieldMismatch,
    #[error("operation requires a level-0 torsion field")]
    NotLevelZero,
    #[error("malformed input: {0}")]
    BadInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("requested precision cannot be reached: {0}")]
    PrecisionShortfall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
