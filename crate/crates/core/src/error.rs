use thiserror::Error;

/// Errors raised by the algebra engine and the input parsers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors live in different ambient bases (`{left}` vs `{right}`)")]
    BasisMismatch { left: String, right: String },
    #[error("spanning vectors are linearly dependent")]
    DependentVectors,
    #[error("permutation length {perm} does not match {degrees} degrees")]
    LengthMismatch { perm: usize, degrees: usize },
    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("degree cap insufficient: {context} needs degree {needed} but the cap is {cap}")]
    DegreeCap {
        needed: i64,
        cap: u32,
        context: String,
    },
    #[error("invalid generator table: {0}")]
    InvalidDgl(String),
    #[error("element is not in the free Lie algebra spanned in degree {0}")]
    NotLie(i64),
    #[error("invalid decomposition in degree {degree}: {reason}")]
    InvalidDecomposition { degree: i64, reason: String },
    #[error("not a chain map at generator `{0}`")]
    NotChainMap(String),
    #[error("{message} at line {line}, column {column}")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
