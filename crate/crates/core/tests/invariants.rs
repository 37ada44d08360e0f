//! Cross-module distributional invariants at desk scale, with fixed seeds.

use ewens_cycles::ewens::EwensParams;
use ewens_cycles::records::{sample_ptheta, stretches, PthetaSampler, RecordTrace};
use ewens_cycles::rng::Xoshiro256StarStar;
use ewens_cycles::stats::{
    chi_square_homogeneity, independence_check, poisson_gof, EmpiricalDistribution,
};
use ewens_cycles::stretch_ppp::{ppp_above_level, sample_poisson, LevelWindow};

fn theta(t: f64) -> EwensParams {
    EwensParams::new(t).unwrap()
}

// Packs the counts of lengths 1..=4 (capped) into one key.
fn length_count_key(lengths: &[usize]) -> u64 {
    let mut c = [0u64; 4];
    for &l in lengths {
        if (1..=4).contains(&l) {
            c[l - 1] = (c[l - 1] + 1).min(6);
        }
    }
    c[0] | c[1] << 8 | c[2] << 16 | c[3] << 24
}

#[test]
fn poisson_gof_is_calibrated_on_genuine_poisson_draws() {
    // p >= 0.001 across seeds, and p roughly uniform overall
    let mut failures = 0;
    let mut below_half = 0;
    let runs = 60;
    for seed in 0..runs {
        let mut rng = Xoshiro256StarStar::stream(9_000 + seed, 0);
        let samples: Vec<u64> = (0..10_000).map(|_| sample_poisson(1.5, &mut rng)).collect();
        let r = poisson_gof(&samples, 1.5).unwrap();
        if r.p_value < 0.001 {
            failures += 1;
        }
        if r.p_value < 0.5 {
            below_half += 1;
        }
    }
    assert!(
        failures == 0,
        "{failures} calibration failures in {runs} runs"
    );
    // uniform p-values put ~30 of 60 below one half
    assert!((15..=45).contains(&below_half), "below_half = {below_half}");
}

#[test]
fn independence_z_is_calibrated_on_independent_poisson_pairs() {
    for seed in 0..20 {
        let mut rng = Xoshiro256StarStar::stream(9_100 + seed, 0);
        let x: Vec<u64> = (0..20_000).map(|_| sample_poisson(1.5, &mut rng)).collect();
        let y: Vec<u64> = (0..20_000)
            .map(|_| sample_poisson(0.75, &mut rng))
            .collect();
        let r = independence_check(&x, &y).unwrap();
        assert!(r.z_score.abs() <= 4.0, "seed {seed}: z = {}", r.z_score);
    }
}

#[test]
fn window_stretch_law_matches_the_stopped_record_construction() {
    // The joint length-count law above s from the direct point process
    // equals the law of stretches of the P_theta sequence stopped at its
    // first value below s.
    let s = 0.3;
    let params = theta(2.0);
    let window = LevelWindow::new(s, params.theta()).unwrap();
    let reps = 30_000;

    let mut rng = Xoshiro256StarStar::stream(9_200, 0);
    let direct: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let lengths: Vec<usize> = ppp_above_level(&window, &mut rng)
                .unwrap()
                .iter()
                .map(|st| st.len())
                .collect();
            length_count_key(&lengths)
        })
        .collect();

    let stopped: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let mut sampler = PthetaSampler::new(params);
            let mut values = Vec::new();
            loop {
                let v = sampler.step(&mut rng).unwrap();
                if v < s {
                    break;
                }
                values.push(v);
            }
            let lengths: Vec<usize> = if values.is_empty() {
                Vec::new()
            } else {
                let n = values.len();
                let trace = RecordTrace::from_values(values).unwrap();
                let (complete, trailing) = stretches(&trace, n);
                complete
                    .iter()
                    .map(|st| st.len())
                    .chain(std::iter::once(trailing.len()))
                    .collect()
            };
            length_count_key(&lengths)
        })
        .collect();

    let r = chi_square_homogeneity(&direct, &stopped).unwrap();
    assert!(
        r.p_value >= 0.001,
        "homogeneity rejected: stat {} dof {} p {}",
        r.statistic,
        r.dof,
        r.p_value
    );
}

#[test]
fn restriction_of_the_product_process_thins_correctly() {
    // K_1 counts from dynamic_sample restricted to theta = 1 against direct
    // window samples at theta = 1
    use ewens_cycles::stretch_ppp::{dynamic_sample, infinite_cycle_counts};
    let s = 0.3;
    let reps = 30_000;
    let mut rng = Xoshiro256StarStar::stream(9_300, 0);

    let restricted: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let sample = dynamic_sample(2.0, s, &mut rng).unwrap();
            let counts = infinite_cycle_counts(sample.restrict(1.0).unwrap());
            counts.k(1).min(8)
        })
        .collect();

    let window = LevelWindow::new(s, 1.0).unwrap();
    let direct: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let counts = infinite_cycle_counts(&ppp_above_level(&window, &mut rng).unwrap());
            counts.k(1).min(8)
        })
        .collect();

    let r = chi_square_homogeneity(&restricted, &direct).unwrap();
    assert!(r.p_value >= 0.001, "p = {}", r.p_value);
}

#[test]
fn superposition_adds_intensities() {
    // independent samples at 0.7 and 1.3 summed against a single sample at 2.0
    let s = 0.3;
    let reps = 30_000;
    let mut rng = Xoshiro256StarStar::stream(9_400, 0);
    let w1 = LevelWindow::new(s, 0.7).unwrap();
    let w2 = LevelWindow::new(s, 1.3).unwrap();
    let w = LevelWindow::new(s, 2.0).unwrap();

    let summed: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let a = ppp_above_level(&w1, &mut rng).unwrap();
            let b = ppp_above_level(&w2, &mut rng).unwrap();
            let lengths: Vec<usize> = a.iter().chain(b.iter()).map(|st| st.len()).collect();
            length_count_key(&lengths)
        })
        .collect();

    let single: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let lengths: Vec<usize> = ppp_above_level(&w, &mut rng)
                .unwrap()
                .iter()
                .map(|st| st.len())
                .collect();
            length_count_key(&lengths)
        })
        .collect();

    let r = chi_square_homogeneity(&summed, &single).unwrap();
    assert!(r.p_value >= 0.001, "p = {}", r.p_value);
}

#[test]
fn record_sampler_indicator_covariances_vanish() {
    // record indicators at distinct positions are uncorrelated
    let params = theta(1.5);
    let reps = 20_000;
    let n = 12;
    let mut rng = Xoshiro256StarStar::stream(9_500, 0);
    let mut cols: Vec<Vec<u64>> = (0..n).map(|_| Vec::with_capacity(reps)).collect();
    for _ in 0..reps {
        let trace = sample_ptheta(n, params, &mut rng).unwrap();
        for (i, &b) in trace.indicators().iter().enumerate() {
            cols[i].push(u64::from(b));
        }
    }
    for &(i, j) in &[(1usize, 2usize), (2, 7), (3, 11), (5, 6)] {
        let r = independence_check(&cols[i], &cols[j]).unwrap();
        assert!(r.z_score.abs() <= 4.0, "({i},{j}): z = {}", r.z_score);
    }
}

#[test]
fn window_per_length_counts_are_uncorrelated() {
    // counts of length-1 and length-2 stretches across windows
    let window = LevelWindow::new(0.3, 2.0).unwrap();
    let reps = 30_000;
    let mut rng = Xoshiro256StarStar::stream(9_700, 0);
    let mut c1 = Vec::with_capacity(reps);
    let mut c2 = Vec::with_capacity(reps);
    let mut c3 = Vec::with_capacity(reps);
    for _ in 0..reps {
        let stretches = ppp_above_level(&window, &mut rng).unwrap();
        c1.push(stretches.iter().filter(|st| st.len() == 1).count() as u64);
        c2.push(stretches.iter().filter(|st| st.len() == 2).count() as u64);
        c3.push(stretches.iter().filter(|st| st.len() == 3).count() as u64);
    }
    for (a, b, label) in [(&c1, &c2, "1-2"), (&c1, &c3, "1-3"), (&c2, &c3, "2-3")] {
        let r = independence_check(a, b).unwrap();
        assert!(r.z_score.abs() <= 4.0, "lengths {label}: z = {}", r.z_score);
    }
}

#[test]
fn random_size_cycle_counts_are_uncorrelated() {
    use ewens_cycles::shepp_lloyd::sample_random_size_ewens;
    let params = theta(2.5);
    let reps = 30_000;
    let mut rng = Xoshiro256StarStar::stream(9_800, 0);
    let mut k1 = Vec::with_capacity(reps);
    let mut k2 = Vec::with_capacity(reps);
    let mut k3 = Vec::with_capacity(reps);
    for _ in 0..reps {
        let counts = sample_random_size_ewens(params, 0.4, &mut rng)
            .unwrap()
            .cycle_counts();
        k1.push(counts.k(1));
        k2.push(counts.k(2));
        k3.push(counts.k(3));
    }
    for (a, b, label) in [(&k1, &k2, "1-2"), (&k1, &k3, "1-3"), (&k2, &k3, "2-3")] {
        let r = independence_check(a, b).unwrap();
        assert!(r.z_score.abs() <= 4.0, "K_{label}: z = {}", r.z_score);
    }
}

#[test]
fn random_size_law_is_infinitely_divisible_in_theta() {
    // independent sizes at theta = 1 and 1.5 summed match theta = 2.5
    use ewens_cycles::shepp_lloyd::sample_random_size_ewens;
    let p = 0.4;
    let reps = 30_000;
    let mut rng = Xoshiro256StarStar::stream(9_900, 0);

    let summed: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let a = sample_random_size_ewens(theta(1.0), p, &mut rng)
                .unwrap()
                .size();
            let b = sample_random_size_ewens(theta(1.5), p, &mut rng)
                .unwrap()
                .size();
            ((a + b) as u64).min(40)
        })
        .collect();
    let single: EmpiricalDistribution<u64> = (0..reps)
        .map(|_| {
            let n = sample_random_size_ewens(theta(2.5), p, &mut rng)
                .unwrap()
                .size();
            (n as u64).min(40)
        })
        .collect();

    let r = chi_square_homogeneity(&summed, &single).unwrap();
    assert!(r.p_value >= 0.001, "p = {}", r.p_value);
}

#[test]
fn change_of_measure_reweights_arbitrary_statistics() {
    // E_theta[f] = E_1[f * dP_theta/dP_1] for a statistic that is not a
    // record functional: f(u) = mean of the prefix
    use ewens_cycles::records::density_ratio_log;
    let params = theta(0.6);
    let n = 5;
    let reps = 200_000;
    let mut rng = Xoshiro256StarStar::stream(9_600, 0);

    let mut sum_w = 0.0;
    let mut sumsq_w = 0.0;
    for _ in 0..reps {
        let trace = sample_ptheta(n, theta(1.0), &mut rng).unwrap();
        let f: f64 = trace.u().iter().sum::<f64>() / n as f64;
        let w = f * density_ratio_log(trace.u(), params).unwrap().exp();
        sum_w += w;
        sumsq_w += w * w;
    }
    let est1 = sum_w / reps as f64;
    let var1 = (sumsq_w / reps as f64 - est1 * est1).max(0.0);

    let mut sum_d = 0.0;
    let mut sumsq_d = 0.0;
    for _ in 0..reps {
        let trace = sample_ptheta(n, params, &mut rng).unwrap();
        let f: f64 = trace.u().iter().sum::<f64>() / n as f64;
        sum_d += f;
        sumsq_d += f * f;
    }
    let est2 = sum_d / reps as f64;
    let var2 = (sumsq_d / reps as f64 - est2 * est2).max(0.0);

    let gap = (est1 - est2).abs();
    let bound = 4.0 * ((var1 + var2) / reps as f64).sqrt();
    assert!(gap < bound, "gap {gap}, bound {bound}");
}
