use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root {index} = {root} is not in the open lower half-plane (imaginary part must be < 0)")]
    RootNotInLowerHalfPlane { index: usize, root: Complex64 },

    #[error("exponential coefficient must be finite and >= 0, got {0}")]
    NegativeExponent(f64),

    #[error("constant function is not a valid generator: exp_coefficient is 0 and there are no roots")]
    ConstantGenerator,

    #[error("leading scale must be finite and nonzero, got {0}")]
    InvalidScale(Complex64),

    #[error("points {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("target phase {target} is outside the attainable range ({inf}, {sup})")]
    PhaseOutOfRange { target: f64, inf: f64, sup: f64 },

    #[error("node {index} did not converge within {iterations} iterations; last bracket [{lo}, {hi}]")]
    IterationLimit {
        index: i64,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("matrix is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PhaseOutOfRange { .. } | Error::IterationLimit { .. } | Error::IllConditioned { .. }
        )
    }
}
