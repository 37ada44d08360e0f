//! The coupling between inhomogeneous Bernoulli trials and cycle structure:
//! trial `i` succeeds with probability `theta / (theta + i - 1)`, the
//! insertion construction turns a length-n trial prefix into an
//! Ewens(theta) permutation, and spacings between successes reproduce the
//! cycle-length counts exactly, path by path.

use crate::error::{Error, Result};
use crate::ewens::EwensParams;
use crate::perm::{CycleCounts, Permutation};
use crate::rng::Rng;

/// A finite prefix of the Bernoulli trial sequence, most recent trial last:
/// `bits[i-1]` is the outcome of trial `i`, which succeeds with probability
/// `theta / (theta + i - 1)` (so trial 1 always succeeds).
#[derive(Debug, Clone)]
pub struct BernoulliTrace {
    theta: f64,
    bits: Vec<u8>,
}

impl BernoulliTrace {
    /// Wraps an explicit bit pattern (tests, replay).
    pub fn from_bits(bits: Vec<u8>, theta: f64) -> Result<Self> {
        let params = EwensParams::new(theta)?;
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::MalformedInsertion("bits must be 0 or 1"));
        }
        Ok(Self {
            theta: params.theta(),
            bits,
        })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Samples trials 1..=n; one uniform per trial.
pub fn sample_bernoulli<R: Rng>(n: usize, params: EwensParams, rng: &mut R) -> BernoulliTrace {
    assert!(n >= 1);
    let theta = params.theta();
    let bits = (1..=n)
        .map(|i| u8::from(rng.bernoulli(theta / (theta + (i - 1) as f64))))
        .collect();
    BernoulliTrace { theta, bits }
}

/// The insertion order `X_1, …, X_n` (0-based values here) together with the
/// cycle-start flags: position `i` starts a cycle iff `i = 1` or trial
/// `n + 2 - i` succeeded.
#[derive(Debug, Clone)]
pub struct InsertionSequence {
    x: Vec<u32>,
    cycle_start: Vec<bool>,
}

impl InsertionSequence {
    pub fn from_parts(x: Vec<u32>, cycle_start: Vec<bool>) -> Result<Self> {
        if x.len() != cycle_start.len() {
            return Err(Error::LengthMismatch(x.len(), cycle_start.len()));
        }
        // x must be a permutation of 0..n
        Permutation::from_image(x.clone())?;
        if cycle_start.first() != Some(&true) {
            return Err(Error::MalformedInsertion("position 1 must start a cycle"));
        }
        Ok(Self { x, cycle_start })
    }

    pub fn x(&self) -> &[u32] {
        &self.x
    }

    pub fn x_one_based(&self) -> Vec<u32> {
        self.x.iter().map(|&v| v + 1).collect()
    }

    pub fn cycle_start(&self) -> &[bool] {
        &self.cycle_start
    }
}

/// Ordered set of still-unused elements over `0..n` with O(log n) removal
/// and order-statistic selection, backed by a Fenwick tree.
struct FreeSet {
    tree: Vec<u32>,
    len: usize,
}

impl FreeSet {
    fn new(n: usize) -> Self {
        let mut s = Self {
            tree: vec![0; n + 1],
            len: 0,
        };
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.len += 1;
        let mut i = v + 1;
        while i < self.tree.len() {
            self.tree[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    fn remove(&mut self, v: usize) {
        self.len -= 1;
        let mut i = v + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
    }

    fn len(&self) -> usize {
        self.len
    }

    /// The k-th smallest free element, k in 0..len (binary lifting descent).
    fn select(&self, k: usize) -> usize {
        debug_assert!(k < self.len);
        let mut remaining = (k + 1) as u32;
        let mut pos = 0usize;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] < remaining {
                pos = next;
                remaining -= self.tree[pos];
            }
            step >>= 1;
        }
        pos // 1-based index `pos + 1` holds the answer; value is 0-based pos
    }
}

/// Runs the insertion rule over a trial prefix: `X_1` is element 1; for
/// `i >= 2`, a success at trial `n + 2 - i` forces the smallest unused
/// element, otherwise `X_i` is uniform over the unused ones (one bounded
/// index draw).
pub fn sample_insertion<R: Rng>(trace: &BernoulliTrace, rng: &mut R) -> InsertionSequence {
    let n = trace.len();
    assert!(n >= 1);
    let bits = trace.bits();
    let mut free = FreeSet::new(n);
    let mut x = Vec::with_capacity(n);
    let mut cycle_start = Vec::with_capacity(n);
    free.remove(0);
    x.push(0u32);
    cycle_start.push(true);
    for i in 2..=n {
        let forced = bits[n + 1 - i] == 1; // trial n + 2 - i, 0-based slot
        let v = if forced {
            free.select(0)
        } else {
            free.select(rng.index(free.len()))
        };
        free.remove(v);
        x.push(v as u32);
        cycle_start.push(forced);
    }
    InsertionSequence { x, cycle_start }
}

/// Cuts the insertion order at the cycle-start flags; each maximal run
/// becomes one cycle.
pub fn permutation_from_insertion(ins: &InsertionSequence) -> Result<Permutation> {
    let n = ins.x.len();
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    if !ins.cycle_start[0] {
        return Err(Error::MalformedInsertion("position 1 must start a cycle"));
    }
    let mut image = vec![0u32; n];
    let mut run_start = 0usize;
    for i in 0..n {
        let run_ends = i + 1 == n || ins.cycle_start[i + 1];
        if run_ends {
            image[ins.x[i] as usize] = ins.x[run_start];
            run_start = i + 1;
        } else {
            image[ins.x[i] as usize] = ins.x[i + 1];
        }
    }
    Permutation::from_image(image)
}

/// Spacing counts of a finite trial prefix, with the conventional success
/// appended at position `n + 1`: an l-spacing is a success, l - 1 failures,
/// then a success. `conserved` records whether `sum_l l*C_l = n` is
/// guaranteed, which requires the first bit to be a success.
#[derive(Debug, Clone)]
pub struct SpacingCounts {
    pub counts: CycleCounts,
    pub conserved: bool,
}

pub fn spacing_counts(bits: &[u8], n: usize) -> SpacingCounts {
    assert!(n >= 1 && bits.len() >= n);
    let mut counts = CycleCounts::new();
    let mut prev: Option<usize> = None;
    for pos in 1..=n + 1 {
        let one = pos == n + 1 || bits[pos - 1] == 1;
        if one {
            if let Some(q) = prev {
                counts.increment(pos - q);
            }
            prev = Some(pos);
        }
    }
    SpacingCounts {
        counts,
        conserved: bits[0] == 1,
    }
}

/// Spacings fully contained in the first `m` trials of the infinite
/// sequence — no appended success, so this approximates the infinite-path
/// counts with truncation bias vanishing in `m`.
pub fn truncated_infinite_spacings<R: Rng>(
    m: usize,
    params: EwensParams,
    rng: &mut R,
) -> CycleCounts {
    assert!(m >= 2);
    let theta = params.theta();
    let mut counts = CycleCounts::new();
    let mut prev: Option<usize> = None;
    for i in 1..=m {
        if rng.bernoulli(theta / (theta + (i - 1) as f64)) {
            if let Some(q) = prev {
                counts.increment(i - q);
            }
            prev = Some(i);
        }
    }
    counts
}

/// Outcome of checking the finite/infinite coupling inequality on one path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CouplingVerdict {
    /// `C_{n,l} <= C_window,l + 1(J_n = l)` held for every `l <= n`.
    Holds,
    /// First length at which the inequality failed.
    Violated { ell: usize },
    /// No success after position `n` inside the window, so the spacing
    /// straddling `n` is unresolved.
    Undecided,
}

/// Verifies the coupling inequality between the finite-scheme counts of the
/// first `n` trials and the window-resolved infinite counts. The window is
/// the whole of `bits`; it must contain a success after position `n` for the
/// check to be decided.
pub fn coupling_inequality_check(bits: &[u8], n: usize) -> CouplingVerdict {
    assert!(n >= 1 && bits.len() >= n);
    if !bits[n..].contains(&1) {
        return CouplingVerdict::Undecided;
    }
    let finite = spacing_counts(bits, n).counts;
    let mut window = CycleCounts::new();
    let mut prev: Option<usize> = None;
    let mut last_in_prefix: Option<usize> = None;
    for (idx, &b) in bits.iter().enumerate() {
        if b == 1 {
            let pos = idx + 1;
            if let Some(q) = prev {
                window.increment(pos - q);
            }
            prev = Some(pos);
            if pos <= n {
                last_in_prefix = Some(pos);
            }
        }
    }
    let j_n = last_in_prefix.map(|l| n + 1 - l);
    for ell in 1..=n {
        let bound = window.k(ell) + u64::from(j_n == Some(ell));
        if finite.k(ell) > bound {
            return CouplingVerdict::Violated { ell };
        }
    }
    CouplingVerdict::Holds
}
