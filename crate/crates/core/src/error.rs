//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by samplers, exact-probability routines and the test
/// statistics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("theta must be a finite, strictly positive real, got {0}")]
    InvalidTheta(f64),

    #[error("{name} must lie strictly inside (0, 1), got {value}")]
    OutsideUnitInterval { name: &'static str, value: f64 },

    #[error("value {0} is outside the open interval (0, 1)")]
    ValueOutOfRange(f64),

    #[error("order {n} exceeds the exhaustive-enumeration limit {limit}")]
    OrderTooLarge { n: usize, limit: usize },

    #[error("order must be at least 1")]
    EmptyOrder,

    #[error("duplicate value detected in a sequence required to be pairwise distinct")]
    DuplicateValue,

    #[error("image is not a bijection of the ground set")]
    NotABijection,

    #[error("malformed insertion sequence: {0}")]
    MalformedInsertion(&'static str),

    #[error("stretch is malformed: {0}")]
    MalformedStretch(&'static str),

    #[error("a floating-point tie persisted after resampling")]
    PersistentTie,

    #[error("iteration guard of {0} steps exceeded")]
    IterationGuard(usize),

    #[error("theta {theta} exceeds the sampled window maximum {theta_max}")]
    ThetaBeyondWindow { theta: f64, theta_max: f64 },

    #[error("probability table is malformed: {0}")]
    BadProbabilityTable(&'static str),

    #[error("observed and expected totals differ by more than the 1e-6 relative guard")]
    TotalMismatch,

    #[error("input lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("fewer than 2 bins remain after merging")]
    TooFewBins,

    #[error("lambda must be finite and strictly positive, got {0}")]
    InvalidLambda(f64),

    #[error("input has zero variance; correlation is undefined")]
    ZeroVariance,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
