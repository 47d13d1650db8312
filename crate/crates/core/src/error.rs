use thiserror::Error;

use crate::group::GroupElement;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not unitary within tolerance")]
    NonUnitary,

    #[error("matrix is not a complex Hadamard matrix within tolerance")]
    NotHadamard,

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("order {0} out of range")]
    OrderOutOfRange(usize),

    #[error("order {order} exceeds the cap of {cap}")]
    OrderTooLarge { order: usize, cap: usize },

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("matrix is not of the form D·P·W for the given Fourier spec")]
    NotDpwForm,

    #[error("extracted set is not closed under addition ({} elements)", members.len())]
    NotClosed { members: Vec<GroupElement> },

    #[error("span inclusion violated: {0}")]
    InclusionViolation(String),

    #[error("{divisor} does not divide {order}")]
    NotDivisor { divisor: usize, order: usize },

    #[error("realization failed for divisors {divisors:?}: expected {expected}, found {found}")]
    RealizationFailed {
        divisors: Vec<usize>,
        expected: usize,
        found: usize,
    },

    #[error("argument {0} outside [0, 1]")]
    DomainError(f64),

    #[error("intersection dimension {generic} disagrees with subgroup order {subgroup}")]
    OracleMismatch { generic: usize, subgroup: usize },

    #[error("matrix entry is not finite")]
    NonFinite,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
