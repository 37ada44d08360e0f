//! Random permutations with Ewens-distributed cycle structure, built three
//! equivalent ways and cross-verified:
//!
//! * the coupling with inhomogeneous Bernoulli trials ([`feller`]), where
//!   spacings between successes reproduce cycle-length counts exactly;
//! * lower records of a sequence drawn from the P_theta law ([`records`]),
//!   whose inter-record stretches are the cycles;
//! * direct simulation of the Poisson point process of stretches above a
//!   level ([`stretch_ppp`]), including the product-process coupling that
//!   runs all theta values on one probability space.
//!
//! [`ewens`] holds exact probabilities and the enumeration oracle,
//! [`shepp_lloyd`] the random-size model with negative binomial sizes and
//! Poisson cycle counts, and [`stats`] the goodness-of-fit harness used to
//! verify all of it.

pub mod error;
pub mod ewens;
pub mod export;
pub mod feller;
pub mod perm;
pub mod records;
pub mod rng;
pub mod shepp_lloyd;
pub mod stats;
pub mod stretch_ppp;

pub use error::{Error, Result};
pub use ewens::EwensParams;
pub use perm::{CycleCounts, Permutation};
pub use records::{RecordTrace, Stretch};
pub use rng::{Rng, Xoshiro256StarStar};

/// NaN-safe test for membership in the open unit interval.
pub(crate) fn in_open_unit(v: f64) -> bool {
    v.is_finite() && v > 0.0 && v < 1.0
}
