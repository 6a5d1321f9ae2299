use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("apartness witness must be positive, got {0}")]
    NonPositiveWitness(Rational),
    #[error("norm certificate magnitude {mag} exceeds norm upper bound {upper} + 1")]
    NormCertificateTooLarge { mag: Rational, upper: Rational },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("matrix rows have inconsistent lengths")]
    RaggedMatrix,
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: Rational },
    #[error("frame bounds must satisfy 0 < A <= B, got A = {lower}, B = {upper}")]
    InvalidFrameBounds { lower: Rational, upper: Rational },
    #[error("target precision must be nonnegative, got {0}")]
    NegativePrecision(i64),
    #[error("left-inverse check failed: residual bound {residual} exceeds {tol}")]
    LeftInverseCheckFailed { residual: String, tol: Rational },
    #[error("no norm certificate available: {0}")]
    MissingNorm(&'static str),
    #[error("enumerator repeated the value {value} at stages {first} and {second}")]
    DuplicateEnumeration { value: usize, first: usize, second: usize },
    #[error("vectors do not span the ambient space (rank {rank} < {dim})")]
    NotSpanning { rank: usize, dim: usize },
    #[error("inverse check failed: T * T_inv is not the identity")]
    NotInverse,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
}
