//! Lower records of a random sequence on (0, 1): the P_theta sampler (a
//! Beta(theta, 1) start, then a mixture keyed by the running minimum),
//! record detection, inter-record stretches, the record-based permutation,
//! and the log density ratio of P_theta against the i.i.d.-uniform case.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ewens::EwensParams;
use crate::perm::{relabel_by_rank, CycleCounts, Permutation};
use crate::rng::Rng;

/// A finite sequence in (0, 1) whose first entry is its strict minimum — one
/// inter-record stretch.
#[derive(Debug, Clone, PartialEq)]
pub struct Stretch {
    values: Vec<f64>,
}

impl Stretch {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::MalformedStretch("stretch must be nonempty"));
        }
        for &v in &values {
            if !crate::in_open_unit(v) {
                return Err(Error::ValueOutOfRange(v));
            }
        }
        if values[1..].iter().any(|&v| v <= values[0]) {
            return Err(Error::MalformedStretch(
                "first entry must be the strict minimum",
            ));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    /// The record value the stretch starts with.
    pub fn min_value(&self) -> f64 {
        self.values[0]
    }
}

/// A sampled prefix `U_1, …, U_n` with its lower-record bookkeeping.
#[derive(Debug, Clone)]
pub struct RecordTrace {
    u: Vec<f64>,
    record_indices: Vec<usize>,
    indicators: Vec<u8>,
    running_min: Vec<f64>,
}

impl RecordTrace {
    /// Computes the bookkeeping for an explicit value sequence. Values must
    /// be pairwise distinct and lie strictly inside (0, 1).
    pub fn from_values(u: Vec<f64>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::EmptyInput("a trace needs at least one value"));
        }
        for &v in &u {
            if !crate::in_open_unit(v) {
                return Err(Error::ValueOutOfRange(v));
            }
        }
        let (record_indices, indicators) = lower_records(&u)?;
        let mut running_min = Vec::with_capacity(u.len());
        let mut min = f64::INFINITY;
        for &v in &u {
            min = min.min(v);
            running_min.push(min);
        }
        Ok(Self {
            u,
            record_indices,
            indicators,
            running_min,
        })
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// 0-based positions of the lower records; position 0 is always one.
    pub fn record_indices(&self) -> &[usize] {
        &self.record_indices
    }

    pub fn record_indices_one_based(&self) -> Vec<usize> {
        self.record_indices.iter().map(|&i| i + 1).collect()
    }

    pub fn indicators(&self) -> &[u8] {
        &self.indicators
    }

    pub fn running_min(&self) -> &[f64] {
        &self.running_min
    }
}

/// Lower-record positions (0-based) and indicators of a distinct-value
/// sequence: position `i` is a record iff `u[i] < u[j]` for every `j < i`.
pub fn lower_records(u: &[f64]) -> Result<(Vec<usize>, Vec<u8>)> {
    let mut seen = HashSet::with_capacity(u.len());
    let mut indices = Vec::new();
    let mut indicators = Vec::with_capacity(u.len());
    let mut min = f64::INFINITY;
    for (i, &v) in u.iter().enumerate() {
        if v.is_nan() || !seen.insert(normalize_bits(v)) {
            return Err(Error::DuplicateValue);
        }
        if v < min {
            min = v;
            indices.push(i);
            indicators.push(1);
        } else {
            indicators.push(0);
        }
    }
    Ok((indices, indicators))
}

fn normalize_bits(v: f64) -> u64 {
    // fold -0.0 onto 0.0 so bitwise hashing agrees with == on values
    if v == 0.0 {
        0.0f64.to_bits()
    } else {
        v.to_bits()
    }
}

/// Incremental P_theta sampler. Draw order per step: the first step consumes
/// one uniform (Beta(theta, 1) by inversion `W^(1/theta)`); every later step
/// consumes one uniform for the mixture branch (new record iff it falls
/// below the running minimum `r`), then one uniform for the value — scaled
/// into (0, r) through the Beta inversion on the record branch, uniform on
/// (r, 1) otherwise.
///
/// Exact floating-point ties (probability zero in theory) are resampled
/// once; a persisting tie aborts with a diagnostic.
#[derive(Debug, Clone)]
pub struct PthetaSampler {
    inv_theta: f64,
    min: f64,
    started: bool,
    seen: HashSet<u64>,
}

impl PthetaSampler {
    pub fn new(params: EwensParams) -> Self {
        Self {
            inv_theta: 1.0 / params.theta(),
            min: f64::INFINITY,
            started: false,
            seen: HashSet::new(),
        }
    }

    pub fn running_min(&self) -> f64 {
        self.min
    }

    pub fn step<R: Rng>(&mut self, rng: &mut R) -> Result<f64> {
        for _attempt in 0..2 {
            let v = if !self.started {
                rng.open01().powf(self.inv_theta)
            } else if rng.open01() < self.min {
                self.min * rng.open01().powf(self.inv_theta)
            } else {
                self.min + (1.0 - self.min) * rng.open01()
            };
            if v > 0.0 && v < 1.0 && self.seen.insert(normalize_bits(v)) {
                self.started = true;
                if v < self.min {
                    self.min = v;
                }
                return Ok(v);
            }
        }
        Err(Error::PersistentTie)
    }
}

/// Samples `U_1, …, U_n` under P_theta and fills in the record bookkeeping.
pub fn sample_ptheta<R: Rng>(n: usize, params: EwensParams, rng: &mut R) -> Result<RecordTrace> {
    assert!(n >= 1);
    let mut sampler = PthetaSampler::new(params);
    let values: Result<Vec<f64>> = (0..n).map(|_| sampler.step(rng)).collect();
    RecordTrace::from_values(values?)
}

/// Splits the first `n` entries of a trace into complete inter-record
/// stretches (those whose following record also lies within the prefix) and
/// the trailing stretch from the last record through position `n`.
pub fn stretches(trace: &RecordTrace, n: usize) -> (Vec<Stretch>, Stretch) {
    assert!(n >= 1 && n <= trace.len());
    let records = &trace.record_indices;
    let u = &trace.u;
    let mut complete = Vec::new();
    let mut last = 0usize;
    for w in records.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b < n {
            complete.push(Stretch {
                values: u[a..b].to_vec(),
            });
            last = b;
        }
    }
    let trailing = Stretch {
        values: u[last..n].to_vec(),
    };
    (complete, trailing)
}

/// The record-based permutation of `[n]`: each stretch becomes one cycle
/// (every entry maps to its successor, the last entry of a stretch closes
/// onto the record value that opened it), relabeled by rank.
#[allow(clippy::needless_range_loop)]
pub fn record_permutation(trace: &RecordTrace, n: usize) -> Result<Permutation> {
    assert!(n >= 1 && n <= trace.len());
    let mut image = vec![0usize; n];
    let mut fill = |a: usize, b: usize| {
        for j in a..b {
            image[j] = j + 1;
        }
        image[b] = a;
    };
    let records = &trace.record_indices;
    let mut last = 0usize;
    for w in records.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b < n {
            fill(a, b - 1);
            last = b;
        }
    }
    fill(last, n - 1);
    relabel_by_rank(&trace.u[..n], &image)
}

/// `log [ theta^{K_n} * min(u)^{theta - 1} ]`, the log density of P_theta
/// with respect to the i.i.d.-uniform law on the first `n` coordinates,
/// where `K_n` is the number of lower records.
pub fn density_ratio_log(u: &[f64], params: EwensParams) -> Result<f64> {
    if u.is_empty() {
        return Err(Error::EmptyInput("density ratio needs at least one value"));
    }
    for &v in u {
        if !crate::in_open_unit(v) {
            return Err(Error::ValueOutOfRange(v));
        }
    }
    let (records, _) = lower_records(u)?;
    let k = records.len() as f64;
    let min = u[*records.last().expect("at least one record")];
    Ok(k * params.theta().ln() + (params.theta() - 1.0) * min.ln())
}

/// Cycle counts read straight off the stretch lengths (complete stretches
/// plus the trailing one); equals the cycle counts of
/// [`record_permutation`] path by path.
pub fn spacing_counts_from_records(trace: &RecordTrace, n: usize) -> CycleCounts {
    let (complete, trailing) = stretches(trace, n);
    complete
        .iter()
        .map(Stretch::len)
        .chain(std::iter::once(trailing.len()))
        .collect()
}
