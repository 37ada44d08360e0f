//! Exact Ewens(theta) probabilities on permutations, rising factorials, the
//! Chinese-restaurant sampler used as an independent oracle, and the
//! generating-function identity E_1[theta^K] = (theta)_n / n!.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::perm::{enumerate_permutations, Permutation};
use crate::rng::Rng;
use crate::stats::CompensatedSum;

/// Largest order for which exact tables are built; 8! = 40320 rows.
pub const EXACT_LIMIT: usize = 8;

/// Validated Ewens parameter. All samplers take this, so `theta > 0` is
/// checked exactly once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EwensParams {
    theta: f64,
}

impl EwensParams {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::InvalidTheta(theta));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Rising factorial `(theta)_n = theta (theta+1) ... (theta+n-1)`, with
/// `(theta)_0 = 1`. Direct product; use [`ln_rising_factorial`] when `n` is
/// large enough to overflow.
pub fn rising_factorial(params: EwensParams, n: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..n {
        acc *= params.theta + i as f64;
    }
    acc
}

/// `ln (theta)_n`, computed term by term in log space.
pub fn ln_rising_factorial(params: EwensParams, n: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        acc.add((params.theta + i as f64).ln());
    }
    acc.value()
}

/// Probability of a specific permutation of `[n]` under Ewens(theta):
/// `theta^K / (theta)_n` where `K` is its number of cycles. Evaluated in log
/// space.
pub fn ewens_pmf(p: &Permutation, params: EwensParams) -> f64 {
    let k = p.cycle_count() as f64;
    (k * params.theta.ln() - ln_rising_factorial(params, p.n())).exp()
}

/// Chinese-restaurant sampler: element `i` (0-based) starts a new cycle with
/// probability `theta / (i + theta)`, otherwise it is inserted after a
/// uniformly chosen earlier element. Output is Ewens(theta)-distributed.
///
/// Draw order per element: one uniform for the branch (skipped for the first
/// element, which always starts a cycle), then one bounded index if joining.
pub fn crp_sample<R: Rng>(n: usize, params: EwensParams, rng: &mut R) -> Permutation {
    assert!(n >= 1);
    let mut image: Vec<u32> = Vec::with_capacity(n);
    image.push(0);
    for i in 1..n {
        let p_new = params.theta / (i as f64 + params.theta);
        if rng.bernoulli(p_new) {
            image.push(i as u32);
        } else {
            let j = rng.index(i);
            let t = image[j];
            image[j] = i as u32;
            image.push(t);
        }
    }
    Permutation::from_image(image).expect("insertion keeps a valid bijection")
}

/// The full Ewens(theta) table over S_n, built by exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    n: usize,
    theta: f64,
    probs: BTreeMap<Permutation, f64>,
}

impl ExactDistribution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn probabilities(&self) -> &BTreeMap<Permutation, f64> {
        &self.probs
    }

    pub fn prob(&self, p: &Permutation) -> f64 {
        self.probs.get(p).copied().unwrap_or(0.0)
    }

    /// Sum of all entries; 1 up to floating accumulation.
    pub fn total(&self) -> f64 {
        let mut s = CompensatedSum::new();
        for &p in self.probs.values() {
            s.add(p);
        }
        s.value()
    }

    /// Table keyed by the packed one-line form, for fast empirical
    /// comparisons.
    pub fn packed(&self) -> BTreeMap<u64, f64> {
        self.probs.iter().map(|(p, &q)| (p.pack_key(), q)).collect()
    }

    /// CSV rows `permutation,k,probability` (1-based one-line form,
    /// space-separated inside the first column).
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "permutation,k,probability")?;
        for (p, &q) in &self.probs {
            let img: Vec<String> = p.one_based_image().iter().map(u32::to_string).collect();
            writeln!(w, "{},{},{}", img.join(" "), p.cycle_count(), fmt_f64(q))?;
        }
        Ok(())
    }
}

/// Builds the exact table for `n <= 8`.
pub fn exact_distribution(n: usize, params: EwensParams) -> Result<ExactDistribution> {
    if n > EXACT_LIMIT {
        return Err(Error::OrderTooLarge {
            n,
            limit: EXACT_LIMIT,
        });
    }
    let probs: BTreeMap<Permutation, f64> = enumerate_permutations(n)?
        .map(|p| {
            let q = ewens_pmf(&p, params);
            (p, q)
        })
        .collect();
    Ok(ExactDistribution {
        n,
        theta: params.theta,
        probs,
    })
}

/// Both sides of the generating-function identity: the enumeration average
/// `E_1[theta^K]` and the closed form `(theta)_n / n!`. The two agree to
/// floating precision.
pub fn pgf_check(n: usize, params: EwensParams) -> Result<(f64, f64)> {
    if n > EXACT_LIMIT {
        return Err(Error::OrderTooLarge {
            n,
            limit: EXACT_LIMIT,
        });
    }
    let mut sum = CompensatedSum::new();
    let mut count = 0u64;
    for p in enumerate_permutations(n)? {
        sum.add(params.theta.powi(p.cycle_count() as i32));
        count += 1;
    }
    let lhs = sum.value() / count as f64;
    let rhs = rising_factorial(params, n) / count as f64;
    Ok((lhs, rhs))
}
