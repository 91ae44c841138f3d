//! Crate-wide error type.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exp needs a series with counit zero")]
    CounitNotZero,
    #[error("log needs a series with counit one")]
    CounitNotOne,
    #[error("not a Lie element: the Dynkin projection does not reproduce it")]
    NotLieElement,
    #[error("wrapped component does not vanish at degree {degree}")]
    WrappedPartNonzero { degree: usize },
    #[error("matrix dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("the weight must be nonzero")]
    ZeroWeight,
}
