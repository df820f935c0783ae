//! Crate-wide error type.
//!
//! Every fallible operation in this crate reports one of these variants.
//! The mathematically interesting ones are [`Error::ParityViolation`],
//! [`Error::RationalityViolation`] and [`Error::ConsistencyViolation`]:
//! they fire when a computation contradicts a theorem the enumeration
//! relies on (gcd degree parity, rationality of family parameters over
//! F_{p^4}, agreement between independently computed data). Seeing one of
//! those means a bug, not bad input, and the CLI turns
//! `ConsistencyViolation` into its own exit code so harnesses can tell the
//! two apart.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: expected F_{{{expected_p}^{expected_k}}}, found F_{{{found_p}^{found_k}}}")]
    FieldMismatch {
        expected_p: u64,
        expected_k: usize,
        found_p: u64,
        found_k: usize,
    },

    #[error("invalid extension degree {0}: the tower supports k in {{1, 2, 4, 8}}")]
    InvalidDegree(usize),

    #[error("invalid modulus {0}: need an odd prime p with 3 <= p < 2^62")]
    InvalidModulus(u64),

    #[error("field order {p}^{k} does not fit the supported range")]
    OrderOverflow { p: u64, k: usize },

    #[error("gcd(0, 0) is undefined")]
    BothZero,

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("series denominator vanishes at term {0}")]
    DenominatorVanishes(usize),

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("polynomial is not square-free")]
    NotSquareFree,

    #[error("invalid Rosenhain triple: coordinates must be distinct and avoid 0 and 1")]
    InvalidTriple,

    #[error("prime mismatch: expected p = {expected}, found {found}")]
    PrimeMismatch { expected: u64, found: u64 },

    #[error("degenerate coefficient configuration")]
    DegenerateConfiguration,

    #[error("branch locus does not split over the requested field")]
    RootsOutsideField,

    #[error("points of a projective triple must be pairwise distinct")]
    DegenerateTriple,

    #[error("parity violation at p = {p}: gcd degree {degree} contradicts the class of p")]
    ParityViolation { p: u64, degree: usize },

    #[error("rationality violation at p = {p}: {found} of {expected} parameter roots lie in the expected field")]
    RationalityViolation { p: u64, expected: usize, found: usize },

    #[error("consistency violation: {0}")]
    ConsistencyViolation(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Error {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
