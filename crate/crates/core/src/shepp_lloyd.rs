//! Random-size Ewens permutations: run the P_theta sequence until the first
//! value drops below `p` and build the record permutation on the prefix.
//! The resulting size is negative binomial (theta, p), the conditional law
//! given the size is exact Ewens(theta), and the cycle counts are
//! independent Poisson(theta (1-p)^l / l) — with the size recovered exactly
//! as `sum_l l K_l` on every sample.

use crate::error::{Error, Result};
use crate::ewens::{ln_rising_factorial, EwensParams};
use crate::perm::{CycleCounts, Permutation};
use crate::records::{record_permutation, PthetaSampler, RecordTrace};
use crate::rng::Rng;
use crate::stats::gamma::ln_gamma;

/// Hard cap on the sampled size; the stopping rule terminates almost surely
/// and reaching the cap indicates something is badly wrong.
pub const SIZE_GUARD: usize = 10_000_000;

/// A permutation together with its (random) order; order 0 is the empty
/// permutation.
#[derive(Debug, Clone)]
pub struct RandomSizePermutation {
    perm: Permutation,
}

impl RandomSizePermutation {
    pub fn new(perm: Permutation) -> Self {
        Self { perm }
    }

    pub fn size(&self) -> usize {
        self.perm.n()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn cycle_counts(&self) -> CycleCounts {
        self.perm.cycle_counts()
    }
}

/// Negative binomial pmf `P(N = n) = (theta)_n / n! * (1-p)^n * p^theta`,
/// including the mass `p^theta` at n = 0 required for normalization.
pub fn negbin_pmf(params: EwensParams, p: f64, n: u64) -> Result<f64> {
    if !crate::in_open_unit(p) {
        return Err(Error::OutsideUnitInterval {
            name: "p",
            value: p,
        });
    }
    let theta = params.theta();
    let log_pmf = ln_rising_factorial(params, n as usize) - ln_gamma(n as f64 + 1.0)
        + n as f64 * (1.0 - p).ln()
        + theta * p.ln();
    Ok(log_pmf.exp())
}

/// Poisson pmf `e^-lambda lambda^k / k!`, evaluated in log space.
pub fn poisson_pmf(lambda: f64, k: u64) -> f64 {
    assert!(lambda >= 0.0 && lambda.is_finite());
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + k as f64 * lambda.ln() - ln_gamma(k as f64 + 1.0)).exp()
}

/// Runs the P_theta sequence until the first value below `p`; the values
/// before the hit form the prefix, and the record permutation on that prefix
/// is the sample. The negative binomial size law is a consequence, not an
/// input.
pub fn sample_random_size_ewens<R: Rng>(
    params: EwensParams,
    p: f64,
    rng: &mut R,
) -> Result<RandomSizePermutation> {
    if !crate::in_open_unit(p) {
        return Err(Error::OutsideUnitInterval {
            name: "p",
            value: p,
        });
    }
    let mut sampler = PthetaSampler::new(params);
    let mut values = Vec::new();
    loop {
        let v = sampler.step(rng)?;
        if v < p {
            break;
        }
        values.push(v);
        if values.len() >= SIZE_GUARD {
            return Err(Error::IterationGuard(SIZE_GUARD));
        }
    }
    if values.is_empty() {
        return Ok(RandomSizePermutation::new(Permutation::identity(0)));
    }
    let n = values.len();
    let trace = RecordTrace::from_values(values)?;
    Ok(RandomSizePermutation::new(record_permutation(&trace, n)?))
}

/// The decomposition identity: the sampled size equals `sum_l l K_l`.
pub fn levy_identity_check(rsp: &RandomSizePermutation) -> bool {
    rsp.size() as u64 == rsp.cycle_counts().weighted_size()
}
