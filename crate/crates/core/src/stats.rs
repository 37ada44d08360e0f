//! Verification statistics: total variation against exact tables, chi-square
//! goodness of fit, Poisson fit, homogeneity of two samples, and a Pearson
//! independence diagnostic.
//!
//! Everything here is deterministic given its inputs; the samplers own all
//! randomness.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Classical validity threshold for the chi-square approximation: bins with
/// a smaller expected count are pooled.
pub const MIN_EXPECTED: f64 = 5.0;

/// Neumaier-compensated summation; keeps long accumulations at a few ulps.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Counted outcomes of a simulation, keyed by any ordered outcome type.
#[derive(Debug, Clone, Default)]
pub struct EmpiricalDistribution<K: Ord> {
    counts: BTreeMap<K, u64>,
    total: u64,
}

impl<K: Ord> EmpiricalDistribution<K> {
    pub fn new() -> Self {
        Self {
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn observe(&mut self, key: K) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn count(&self, key: &K) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn frequency(&self, key: &K) -> f64 {
        self.count(key) as f64 / self.total as f64
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<K, u64> {
        &self.counts
    }

    pub fn to_probabilities(&self) -> BTreeMap<K, f64>
    where
        K: Clone,
    {
        let n = self.total as f64;
        self.counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / n))
            .collect()
    }
}

impl<K: Ord> FromIterator<K> for EmpiricalDistribution<K> {
    fn from_iter<T: IntoIterator<Item = K>>(iter: T) -> Self {
        let mut emp = Self::new();
        for k in iter {
            emp.observe(k);
        }
        emp
    }
}

/// Total variation distance between an empirical distribution and an exact
/// probability table: half the L1 distance over the union of supports.
/// The exact table must sum to 1 within 1e-9.
pub fn tv_distance<K: Ord>(
    emp: &EmpiricalDistribution<K>,
    exact: &BTreeMap<K, f64>,
) -> Result<f64> {
    if emp.total == 0 {
        return Err(Error::EmptyInput("empirical distribution has no samples"));
    }
    let mut mass = CompensatedSum::new();
    for &p in exact.values() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::BadProbabilityTable("negative or non-finite entry"));
        }
        mass.add(p);
    }
    if (mass.value() - 1.0).abs() > 1e-9 {
        return Err(Error::BadProbabilityTable("does not sum to 1"));
    }
    let n = emp.total as f64;
    let mut l1 = CompensatedSum::new();
    for (k, &p) in exact {
        l1.add((emp.count(k) as f64 / n - p).abs());
    }
    // empirical outcomes with no exact mass
    for (k, &c) in &emp.counts {
        if !exact.contains_key(k) {
            l1.add(c as f64 / n);
        }
    }
    Ok(0.5 * l1.value())
}

/// Result of a chi-square test.
#[derive(Debug, Clone, Copy)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square against fully specified expected counts.
///
/// Bins with expected count below [`MIN_EXPECTED`] are pooled into a single
/// tail bin; if the pool itself stays below the threshold it is folded into
/// the last regular bin. Refuses when fewer than 2 bins survive.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<GofResult> {
    if observed.len() != expected.len() {
        return Err(Error::LengthMismatch(observed.len(), expected.len()));
    }
    if observed.is_empty() {
        return Err(Error::EmptyInput("no bins"));
    }
    if expected.iter().any(|&e| !e.is_finite() || e <= 0.0) {
        return Err(Error::BadProbabilityTable(
            "expected counts must be positive and finite",
        ));
    }
    let obs_total: u64 = observed.iter().sum();
    let exp_total: f64 = expected.iter().sum();
    if obs_total == 0 {
        return Err(Error::EmptyInput("no observations"));
    }
    let rel = (obs_total as f64 - exp_total).abs() / exp_total.max(obs_total as f64);
    if rel > 1e-6 {
        return Err(Error::TotalMismatch);
    }

    let mut kept: Vec<(f64, f64)> = Vec::new();
    let mut pool = (0.0f64, 0.0f64);
    let mut pooled_any = false;
    for (&o, &e) in observed.iter().zip(expected) {
        if e >= MIN_EXPECTED {
            kept.push((o as f64, e));
        } else {
            pool.0 += o as f64;
            pool.1 += e;
            pooled_any = true;
        }
    }
    if pooled_any {
        if pool.1 >= MIN_EXPECTED || kept.is_empty() {
            kept.push(pool);
        } else {
            let last = kept.len() - 1;
            kept[last].0 += pool.0;
            kept[last].1 += pool.1;
        }
    }
    if kept.len() < 2 {
        return Err(Error::TooFewBins);
    }

    let mut stat = CompensatedSum::new();
    for &(o, e) in &kept {
        let d = o - e;
        stat.add(d * d / e);
    }
    let statistic = stat.value();
    let dof = kept.len() - 1;
    Ok(GofResult {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
    })
}

/// Chi-square fit of integer samples to a Poisson(lambda) law.
///
/// Bins samples by value up to the point where the expected upper tail drops
/// below the pooling threshold, lumps the tail, and delegates to
/// [`chi_square_gof`]. When the fitted law is so concentrated that a single
/// bin remains (e.g. lambda near 0 with all-zero samples), the test carries
/// no evidence and passes trivially with p = 1.
pub fn poisson_gof(samples: &[u64], lambda: f64) -> Result<GofResult> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("no samples"));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    let n = samples.len() as f64;
    let max_sample = *samples.iter().max().unwrap() as usize;

    // Extend bins past the largest sample while the distribution still
    // expects non-negligible mass there, so missing mass is detected.
    let mut k_hi = 0usize;
    let mut surv = 1.0 - poisson_pmf_raw(lambda, 0);
    while n * surv >= MIN_EXPECTED / 2.0 {
        k_hi += 1;
        surv -= poisson_pmf_raw(lambda, k_hi as u64);
        if k_hi > 1_000_000 {
            break;
        }
    }
    let top = max_sample.max(k_hi);

    let mut observed = vec![0u64; top + 2];
    for &s in samples {
        let idx = (s as usize).min(top + 1);
        observed[idx] += 1;
    }
    let mut expected = Vec::with_capacity(top + 2);
    let mut cdf = 0.0;
    for k in 0..=top {
        let p = poisson_pmf_raw(lambda, k as u64);
        expected.push(n * p);
        cdf += p;
    }
    expected.push(n * (1.0 - cdf).max(f64::MIN_POSITIVE));

    match chi_square_gof(&observed, &expected) {
        Ok(r) => Ok(r),
        Err(Error::TooFewBins) => Ok(GofResult {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
        }),
        Err(e) => Err(e),
    }
}

/// Two-sample chi-square homogeneity test over a common outcome space.
/// Cells are pooled (smallest expected first, into a shared tail) until every
/// expected count in both samples clears the threshold.
pub fn chi_square_homogeneity<K: Ord>(
    a: &EmpiricalDistribution<K>,
    b: &EmpiricalDistribution<K>,
) -> Result<GofResult> {
    if a.total == 0 || b.total == 0 {
        return Err(Error::EmptyInput("both samples must be nonempty"));
    }
    let na = a.total as f64;
    let nb = b.total as f64;
    let total = na + nb;

    let mut keys: Vec<&K> = a.counts.keys().collect();
    for k in b.counts.keys() {
        if !a.counts.contains_key(k) {
            keys.push(k);
        }
    }
    keys.sort();

    // pooled cell probabilities drive both expectations, so pooling by the
    // smaller of the two expected counts is a deterministic merge rule
    let mut cells: Vec<(f64, f64, f64)> = keys
        .iter()
        .map(|k| {
            let oa = a.count(k) as f64;
            let ob = b.count(k) as f64;
            (oa, ob, (oa + ob) / total)
        })
        .collect();
    let min_n = na.min(nb);
    let mut kept: Vec<(f64, f64, f64)> = Vec::new();
    let mut pool = (0.0f64, 0.0f64, 0.0f64);
    let mut pooled_any = false;
    for &(oa, ob, p) in &cells {
        if min_n * p >= MIN_EXPECTED {
            kept.push((oa, ob, p));
        } else {
            pool.0 += oa;
            pool.1 += ob;
            pool.2 += p;
            pooled_any = true;
        }
    }
    if pooled_any {
        if min_n * pool.2 >= MIN_EXPECTED || kept.is_empty() {
            kept.push(pool);
        } else {
            let last = kept.len() - 1;
            kept[last].0 += pool.0;
            kept[last].1 += pool.1;
            kept[last].2 += pool.2;
        }
    }
    cells = kept;
    if cells.len() < 2 {
        return Err(Error::TooFewBins);
    }

    let mut stat = CompensatedSum::new();
    for &(oa, ob, p) in &cells {
        let ea = na * p;
        let eb = nb * p;
        stat.add((oa - ea) * (oa - ea) / ea);
        stat.add((ob - eb) * (ob - eb) / eb);
    }
    let statistic = stat.value();
    let dof = cells.len() - 1;
    Ok(GofResult {
        statistic,
        dof,
        p_value: chi_square_sf(statistic, dof),
    })
}

/// Pearson correlation with its normal-approximation z-score under the
/// independence null (`z = r * sqrt(n - 1)`).
#[derive(Debug, Clone, Copy)]
pub struct Independence {
    pub correlation: f64,
    pub z_score: f64,
}

pub fn independence_check(x: &[u64], y: &[u64]) -> Result<Independence> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::EmptyInput("need at least two paired observations"));
    }
    let n = x.len() as f64;
    let mean = |v: &[u64]| {
        let mut s = CompensatedSum::new();
        for &t in v {
            s.add(t as f64);
        }
        s.value() / n
    };
    let mx = mean(x);
    let my = mean(y);
    let mut sxx = CompensatedSum::new();
    let mut syy = CompensatedSum::new();
    let mut sxy = CompensatedSum::new();
    for (&a, &b) in x.iter().zip(y) {
        let dx = a as f64 - mx;
        let dy = b as f64 - my;
        sxx.add(dx * dx);
        syy.add(dy * dy);
        sxy.add(dx * dy);
    }
    let (sxx, syy, sxy) = (sxx.value(), syy.value(), sxy.value());
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let correlation = sxy / (sxx * syy).sqrt();
    Ok(Independence {
        correlation,
        z_score: correlation * (n - 1.0).sqrt(),
    })
}

/// One line of a verification report.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub test: String,
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub pass: bool,
    pub config: String,
}

impl Verdict {
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{{\"test\":\"{}\",\"statistic\":{},\"p_value\":",
            escape_json(&self.test),
            self.statistic
        );
        match self.p_value {
            Some(p) => {
                let _ = write!(s, "{p}");
            }
            None => s.push_str("null"),
        }
        let _ = write!(
            s,
            ",\"pass\":{},\"config\":\"{}\"}}",
            self.pass,
            escape_json(&self.config)
        );
        s
    }
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom, via the regularized incomplete gamma function.
pub fn chi_square_sf(statistic: f64, dof: usize) -> f64 {
    assert!(dof >= 1, "chi-square needs at least one degree of freedom");
    gamma::reg_upper(dof as f64 / 2.0, statistic / 2.0)
}

fn poisson_pmf_raw(lambda: f64, k: u64) -> f64 {
    (-lambda + k as f64 * lambda.ln() - gamma::ln_gamma(k as f64 + 1.0)).exp()
}

/// Log-gamma and the regularized incomplete gamma functions, implemented by
/// the standard Lanczos approximation plus series/continued-fraction
/// evaluation, accurate to roughly 1e-12 relative over the range used here.
pub mod gamma {
    /// Lanczos (g = 7, n = 9) coefficients, as published.
    #[allow(clippy::excessive_precision)]
    const LANCZOS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];

    /// Natural log of the gamma function for x > 0.
    pub fn ln_gamma(x: f64) -> f64 {
        assert!(x > 0.0, "ln_gamma needs a positive argument");
        if x < 0.5 {
            // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
            return std::f64::consts::PI.ln()
                - (std::f64::consts::PI * x).sin().ln()
                - ln_gamma(1.0 - x);
        }
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + 7.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
    }

    /// Regularized lower incomplete gamma P(a, x).
    pub fn reg_lower(a: f64, x: f64) -> f64 {
        assert!(a > 0.0 && x >= 0.0);
        if x == 0.0 {
            return 0.0;
        }
        if x < a + 1.0 {
            lower_series(a, x)
        } else {
            1.0 - upper_cf(a, x)
        }
    }

    /// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
    pub fn reg_upper(a: f64, x: f64) -> f64 {
        assert!(a > 0.0 && x >= 0.0);
        if x == 0.0 {
            return 1.0;
        }
        if x < a + 1.0 {
            1.0 - lower_series(a, x)
        } else {
            upper_cf(a, x)
        }
    }

    /// Series expansion of P(a, x), valid for x < a + 1.
    fn lower_series(a: f64, x: f64) -> f64 {
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..500 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    }

    /// Modified-Lentz continued fraction for Q(a, x), valid for x >= a + 1.
    fn upper_cf(a: f64, x: f64) -> f64 {
        const FPMIN: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x + a * x.ln() - ln_gamma(a)).exp() * h
    }
}
