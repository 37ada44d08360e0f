//! Direct sampling of the Poisson point process of inter-record stretches
//! restricted above a level `s`: the number of stretches is
//! Poisson(-theta log s), lengths follow a logarithmic series law with
//! q = 1 - s, and values given the length are i.i.d. uniforms on (s, 1) with
//! the minimum moved to the front. Also the product-process coupling over
//! theta, and prefix reconstruction back into a value sequence.

use crate::error::{Error, Result};
use crate::ewens::EwensParams;
use crate::perm::CycleCounts;
use crate::records::Stretch;
use crate::rng::Rng;

/// A level restriction `s` with intensity parameter `theta`; the total mass
/// of stretches starting above `s` is `-theta * ln s`.
#[derive(Debug, Clone, Copy)]
pub struct LevelWindow {
    s: f64,
    theta: f64,
}

impl LevelWindow {
    pub fn new(s: f64, theta: f64) -> Result<Self> {
        let params = EwensParams::new(theta)?;
        if !crate::in_open_unit(s) {
            return Err(Error::OutsideUnitInterval {
                name: "s",
                value: s,
            });
        }
        Ok(Self {
            s,
            theta: params.theta(),
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Expected number of stretches above the level: `-theta * ln s`.
    pub fn intensity(&self) -> f64 {
        -self.theta * self.s.ln()
    }
}

/// Exact Poisson sampler by the product method, split into chunks so the
/// threshold `e^-lambda` never underflows. One uniform per candidate event.
pub fn sample_poisson<R: Rng>(lambda: f64, rng: &mut R) -> u64 {
    assert!(lambda >= 0.0 && lambda.is_finite());
    let mut total = 0u64;
    let mut rem = lambda;
    while rem > 0.0 {
        let chunk = rem.min(64.0);
        rem -= chunk;
        let limit = (-chunk).exp();
        let mut p = 1.0f64;
        loop {
            p *= rng.open01();
            if p <= limit {
                break;
            }
            total += 1;
        }
    }
    total
}

/// Exact logarithmic-series sampler: `P(l) = q^l / (l * (-ln(1-q)))` for
/// `l >= 1`, by CDF inversion with a running sum. The iteration cap is the
/// point where the remaining tail falls below uniform-draw resolution; a
/// draw that somehow outruns it reports an error instead of truncating.
pub fn log_series_length<R: Rng>(q: f64, rng: &mut R) -> Result<u64> {
    if !crate::in_open_unit(q) {
        return Err(Error::OutsideUnitInterval {
            name: "q",
            value: q,
        });
    }
    let norm = -(1.0 - q).ln();
    // tail(m) < q^(m+1) / (norm * (1 - q)) < 2^-54 beyond the cap
    let cap_f = (54.0 * std::f64::consts::LN_2 - (norm * (1.0 - q)).ln()) / -q.ln();
    let cap = (cap_f.ceil() as usize + 16).max(64);
    let u = rng.open01();
    let mut term = q / norm;
    let mut cum = term;
    let mut ell = 1u64;
    while u > cum {
        if ell as usize >= cap {
            return Err(Error::IterationGuard(cap));
        }
        term *= q * ell as f64 / (ell + 1) as f64;
        ell += 1;
        cum += term;
    }
    Ok(ell)
}

/// One stretch of prescribed length above the level: `ell` i.i.d. uniforms
/// on (s, 1), minimum moved to the front with the relative order of the
/// rest preserved. A duplicate among the draws (a floating-point artifact)
/// is resampled once.
pub fn sample_stretch_given_length<R: Rng>(ell: usize, s: f64, rng: &mut R) -> Result<Stretch> {
    assert!(ell >= 1);
    if !crate::in_open_unit(s) {
        return Err(Error::OutsideUnitInterval {
            name: "s",
            value: s,
        });
    }
    for _attempt in 0..2 {
        let mut values: Vec<f64> = (0..ell).map(|_| s + (1.0 - s) * rng.open01()).collect();
        let mut argmin = 0;
        for (i, &v) in values.iter().enumerate() {
            if v < values[argmin] {
                argmin = i;
            }
        }
        let min = values.remove(argmin);
        values.insert(0, min);
        if has_duplicates(&values) {
            continue;
        }
        return Stretch::new(values);
    }
    Err(Error::PersistentTie)
}

fn has_duplicates(values: &[f64]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Samples the point process restricted above the window level: a
/// Poisson(-theta ln s) count, then i.i.d. stretches (length first, values
/// second).
pub fn ppp_above_level<R: Rng>(window: &LevelWindow, rng: &mut R) -> Result<Vec<Stretch>> {
    let count = sample_poisson(window.intensity(), rng);
    let q = 1.0 - window.s;
    (0..count)
        .map(|_| {
            let ell = log_series_length(q, rng)?;
            sample_stretch_given_length(ell as usize, window.s, rng)
        })
        .collect()
}

/// One point of the product process: a coordinate on the theta axis and a
/// stretch.
#[derive(Debug, Clone)]
pub struct ThetaPoint {
    pub theta_coord: f64,
    pub stretch: Stretch,
}

/// A joint sample of the product process over `(0, theta_max]` above level
/// `s`; restricting to `theta <= theta_max` recovers the window law at
/// `theta` for every theta simultaneously (the dynamic coupling).
#[derive(Debug, Clone)]
pub struct DynamicSample {
    theta_max: f64,
    s: f64,
    points: Vec<ThetaPoint>,
}

impl DynamicSample {
    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn points(&self) -> &[ThetaPoint] {
        &self.points
    }

    /// Stretches whose coordinate lies at or below `theta`, order preserved.
    /// Refuses a `theta` beyond the sampled window.
    pub fn restrict(&self, theta: f64) -> Result<Vec<&Stretch>> {
        if !theta.is_finite() || theta < 0.0 {
            return Err(Error::InvalidTheta(theta));
        }
        if theta > self.theta_max {
            return Err(Error::ThetaBeyondWindow {
                theta,
                theta_max: self.theta_max,
            });
        }
        Ok(self
            .points
            .iter()
            .filter(|p| p.theta_coord <= theta)
            .map(|p| &p.stretch)
            .collect())
    }
}

/// Samples the product process: Poisson(theta_max * (-ln s)) points, each
/// with an independent uniform coordinate on (0, theta_max) and an
/// independent stretch from the window law. Draw order per point:
/// coordinate, length, values.
pub fn dynamic_sample<R: Rng>(theta_max: f64, s: f64, rng: &mut R) -> Result<DynamicSample> {
    let window = LevelWindow::new(s, theta_max)?;
    let count = sample_poisson(window.intensity(), rng);
    let q = 1.0 - s;
    let points = (0..count)
        .map(|_| {
            let theta_coord = theta_max * rng.open01();
            let ell = log_series_length(q, rng)?;
            let stretch = sample_stretch_given_length(ell as usize, s, rng)?;
            Ok(ThetaPoint {
                theta_coord,
                stretch,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DynamicSample {
        theta_max,
        s,
        points,
    })
}

/// Concatenates stretches in strictly decreasing order of their record
/// values — the order in which they occur in time — recovering a value
/// prefix whose own record structure reproduces the input stretches.
pub fn reconstruct_prefix(stretches: &[Stretch]) -> Result<Vec<f64>> {
    let mut order: Vec<usize> = (0..stretches.len()).collect();
    order.sort_by(|&a, &b| {
        stretches[b]
            .min_value()
            .partial_cmp(&stretches[a].min_value())
            .unwrap()
    });
    for w in order.windows(2) {
        if stretches[w[0]].min_value() == stretches[w[1]].min_value() {
            return Err(Error::DuplicateValue);
        }
    }
    let mut prefix = Vec::with_capacity(stretches.iter().map(Stretch::len).sum());
    for i in order {
        prefix.extend_from_slice(stretches[i].values());
    }
    Ok(prefix)
}

/// Histogram of stretch lengths: the cycle counts of the infinite
/// permutation restricted to cycles whose minimum lies above the window
/// level.
pub fn infinite_cycle_counts<'a, I>(stretches: I) -> CycleCounts
where
    I: IntoIterator<Item = &'a Stretch>,
{
    stretches.into_iter().map(Stretch::len).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::testutil::ScriptRng;
    use crate::rng::Xoshiro256StarStar;

    #[test]
    fn window_validation_and_intensity() {
        assert!(LevelWindow::new(0.0, 1.0).is_err());
        assert!(LevelWindow::new(1.0, 1.0).is_err());
        assert!(LevelWindow::new(0.5, 0.0).is_err());
        let w = LevelWindow::new(0.3, 2.0).unwrap();
        assert!((w.intensity() - 2.4079456086518722).abs() < 1e-12);
    }

    #[test]
    fn poisson_sampler_moments() {
        let mut rng = Xoshiro256StarStar::seeded(31);
        assert_eq!(sample_poisson(0.0, &mut rng), 0);

        let reps = 100_000;
        let lambda = 2.4079456086518722;
        let mut sum = 0u64;
        let mut sq = 0u64;
        for _ in 0..reps {
            let k = sample_poisson(lambda, &mut rng);
            sum += k;
            sq += k * k;
        }
        let mean = sum as f64 / reps as f64;
        let var = sq as f64 / reps as f64 - mean * mean;
        let se_mean = (lambda / reps as f64).sqrt();
        assert!((mean - lambda).abs() < 4.0 * se_mean, "mean {mean}");
        assert!((var - lambda).abs() < 0.1, "var {var}");

        // chunked path
        let reps = 20_000;
        let lambda = 150.0;
        let mut sum = 0u64;
        for _ in 0..reps {
            sum += sample_poisson(lambda, &mut rng);
        }
        let mean = sum as f64 / reps as f64;
        let se = (lambda / reps as f64).sqrt();
        assert!((mean - lambda).abs() < 4.0 * se, "chunked mean {mean}");
    }

    #[test]
    fn log_series_pmf_normalizes_numerically() {
        // running-sum oracle: sum of q^l / (l * -ln(1-q)) over l reaches 1
        for &q in &[0.1, 0.5, 0.7, 0.95] {
            let norm = -(1.0f64 - q).ln();
            let mut term = q / norm;
            let mut cum = term;
            let mut ell = 1.0;
            while term > 1e-18 {
                term *= q * ell / (ell + 1.0);
                ell += 1.0;
                cum += term;
            }
            assert!((cum - 1.0).abs() < 1e-12, "q={q}: {cum}");
        }
    }

    #[test]
    fn log_series_frequencies_and_mean() {
        let mut rng = Xoshiro256StarStar::seeded(32);
        let reps = 100_000;

        // P(1) at q = 0.5 is 1 / (2 ln 2)
        let p1 = 0.5 / std::f64::consts::LN_2;
        assert!((p1 - 0.7213475204444817).abs() < 1e-15);
        let hits = (0..reps)
            .filter(|_| log_series_length(0.5, &mut rng).unwrap() == 1)
            .count();
        let freq = hits as f64 / reps as f64;
        let se = (p1 * (1.0 - p1) / reps as f64).sqrt();
        assert!((freq - p1).abs() < 4.0 * se, "freq {freq}");

        // mean at q = 0.7 is q / ((1-q) * -ln(1-q))
        let mean_exact = 0.7 / (0.3 * -(0.3f64).ln());
        assert!((mean_exact - 1.9380282718592536).abs() < 1e-12);
        let mut sum = 0u64;
        for _ in 0..reps {
            sum += log_series_length(0.7, &mut rng).unwrap();
        }
        let mean = sum as f64 / reps as f64;
        // Var = E[L^2] - mean^2 with E[L^2] = q / ((1-q)^2 * norm)
        let norm = -(0.3f64).ln();
        let var = 0.7 / (0.09 * norm) - mean_exact * mean_exact;
        let se = (var / reps as f64).sqrt();
        assert!((mean - mean_exact).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn log_series_degenerates_to_one_as_q_vanishes() {
        let mut rng = Xoshiro256StarStar::seeded(33);
        let ones = (0..10_000)
            .filter(|_| log_series_length(1e-4, &mut rng).unwrap() == 1)
            .count();
        assert!(ones >= 9_980, "{ones}");
    }

    #[test]
    fn log_series_domain_errors() {
        let mut rng = Xoshiro256StarStar::seeded(34);
        assert!(log_series_length(0.0, &mut rng).is_err());
        assert!(log_series_length(1.0, &mut rng).is_err());
        assert!(log_series_length(-0.2, &mut rng).is_err());
        assert!(log_series_length(f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn stretch_given_length_basics() {
        let mut rng = Xoshiro256StarStar::seeded(35);
        for _ in 0..500 {
            let s = sample_stretch_given_length(1, 0.3, &mut rng).unwrap();
            assert_eq!(s.len(), 1);
            assert!(s.values()[0] > 0.3 && s.values()[0] < 1.0);
        }
        for _ in 0..500 {
            let s = sample_stretch_given_length(5, 0.3, &mut rng).unwrap();
            assert_eq!(s.len(), 5);
            assert_eq!(
                s.min_value(),
                s.values().iter().copied().fold(f64::INFINITY, f64::min)
            );
            assert!(s.values().iter().all(|&v| v > 0.3 && v < 1.0));
        }
    }

    #[test]
    fn stretch_given_length_preserves_relative_order() {
        // scripted draws with known ranks: raw words k<<11 give u = (k|1)/2^53
        let words: Vec<u64> = [7u64 << 20, 3 << 20, 15 << 20, 5 << 20]
            .iter()
            .map(|k| k << 11)
            .collect();
        let mut rng = ScriptRng::new(&words);
        let s = sample_stretch_given_length(4, 0.5, &mut rng).unwrap();
        let v = s.values();
        // minimum (from word 3) moves to front; 7, 15, 5 keep their order
        assert!(v[0] < v[1] && v[0] < v[2] && v[0] < v[3]);
        assert!(v[1] < v[2]); // 7 before 15
        assert!(v[3] < v[1]); // 5 is the second smallest, stays last
    }

    #[test]
    fn stretch_min_of_two_uniforms_has_the_right_mean() {
        let mut rng = Xoshiro256StarStar::seeded(36);
        let reps = 100_000;
        let s = 0.3;
        let mut sum = 0.0;
        for _ in 0..reps {
            sum += sample_stretch_given_length(2, s, &mut rng)
                .unwrap()
                .min_value();
        }
        let mean = sum / reps as f64;
        let expect = s + (1.0 - s) / 3.0;
        assert!((mean - expect).abs() < 0.004, "mean {mean}");
    }

    #[test]
    fn ppp_count_and_per_length_means() {
        let window = LevelWindow::new(0.3, 2.0).unwrap();
        let mut rng = Xoshiro256StarStar::seeded(37);
        let reps = 100_000;
        let mut count_sum = 0u64;
        let mut len1 = 0u64;
        let mut len2 = 0u64;
        for _ in 0..reps {
            let stretches = ppp_above_level(&window, &mut rng).unwrap();
            count_sum += stretches.len() as u64;
            for st in &stretches {
                match st.len() {
                    1 => len1 += 1,
                    2 => len2 += 1,
                    _ => {}
                }
                assert!(st.min_value() > 0.3);
            }
        }
        let n = reps as f64;
        let mean = count_sum as f64 / n;
        let lambda = window.intensity();
        assert!(
            (mean - lambda).abs() < 4.0 * (lambda / n).sqrt(),
            "count mean {mean}"
        );
        // expected number of length-l stretches: theta (1-s)^l / l
        let l1 = 2.0 * 0.7;
        let l2 = 2.0 * 0.49 / 2.0;
        assert!((len1 as f64 / n - l1).abs() < 4.0 * (l1 / n).sqrt());
        assert!((len2 as f64 / n - l2).abs() < 4.0 * (l2 / n).sqrt());
    }

    #[test]
    fn ppp_is_almost_surely_empty_near_level_one() {
        let window = LevelWindow::new(0.9999, 2.0).unwrap();
        let mut rng = Xoshiro256StarStar::seeded(38);
        let total: usize = (0..10_000)
            .map(|_| ppp_above_level(&window, &mut rng).unwrap().len())
            .sum();
        // intensity 2e-4: about 2 stretches in 10^4 windows
        assert!(total < 30, "{total}");
    }

    #[test]
    fn reconstruct_prefix_examples() {
        let a = Stretch::new(vec![0.5, 0.7]).unwrap();
        let b = Stretch::new(vec![0.2, 0.9]).unwrap();
        let prefix = reconstruct_prefix(&[b.clone(), a.clone()]).unwrap();
        assert_eq!(prefix, vec![0.5, 0.7, 0.2, 0.9]);

        let single = reconstruct_prefix(std::slice::from_ref(&a)).unwrap();
        assert_eq!(single, vec![0.5, 0.7]);

        let dup = Stretch::new(vec![0.5, 0.8]).unwrap();
        assert!(matches!(
            reconstruct_prefix(&[a, dup]),
            Err(Error::DuplicateValue)
        ));
    }

    #[test]
    fn reconstruct_round_trips_through_record_stretches() {
        use crate::records::{stretches, RecordTrace};
        let window = LevelWindow::new(0.25, 1.5).unwrap();
        let mut rng = Xoshiro256StarStar::seeded(39);
        for _ in 0..2_000 {
            let sample = ppp_above_level(&window, &mut rng).unwrap();
            if sample.is_empty() {
                continue;
            }
            let prefix = reconstruct_prefix(&sample).unwrap();
            let trace = RecordTrace::from_values(prefix.clone()).unwrap();
            let (complete, trailing) = stretches(&trace, prefix.len());
            let mut recovered = complete;
            recovered.push(trailing);

            let mut expected: Vec<&Stretch> = sample.iter().collect();
            expected.sort_by(|a, b| b.min_value().partial_cmp(&a.min_value()).unwrap());
            assert_eq!(recovered.len(), expected.len());
            for (got, want) in recovered.iter().zip(expected) {
                assert_eq!(got.values(), want.values());
            }
        }
    }

    #[test]
    fn dynamic_sample_restriction_is_monotone() {
        let mut rng = Xoshiro256StarStar::seeded(40);
        let sample = dynamic_sample(2.0, 0.3, &mut rng).unwrap();
        assert_eq!(sample.restrict(0.0).unwrap().len(), 0);
        assert_eq!(sample.restrict(2.0).unwrap().len(), sample.points().len());
        let low = sample.restrict(0.7).unwrap().len();
        let high = sample.restrict(1.3).unwrap().len();
        assert!(low <= high);
        assert!(matches!(
            sample.restrict(2.5),
            Err(Error::ThetaBeyondWindow { .. })
        ));
    }

    #[test]
    fn restricted_counts_match_the_window_intensity() {
        let mut rng = Xoshiro256StarStar::seeded(41);
        let reps = 30_000;
        let mut total = 0usize;
        for _ in 0..reps {
            let sample = dynamic_sample(2.0, 0.3, &mut rng).unwrap();
            total += sample.restrict(1.0).unwrap().len();
        }
        let mean = total as f64 / reps as f64;
        let lambda = -(0.3f64).ln();
        let se = (lambda / reps as f64).sqrt();
        assert!((mean - lambda).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn infinite_cycle_counts_examples() {
        let empty: Vec<Stretch> = vec![];
        assert_eq!(infinite_cycle_counts(&empty), CycleCounts::new());

        let sts = vec![
            Stretch::new(vec![0.5, 0.7]).unwrap(),
            Stretch::new(vec![0.2, 0.9]).unwrap(),
            Stretch::new(vec![0.4]).unwrap(),
        ];
        let counts = infinite_cycle_counts(&sts);
        assert_eq!((counts.k(1), counts.k(2)), (1, 2));
    }
}
