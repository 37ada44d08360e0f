//! Command implementations for the `ewens-cycles` binary: deterministic
//! sampling commands that stream JSON/CSV records, and the verification
//! suite behind `verify`.
//!
//! Reproducibility: record `i` of any sampling command is generated from the
//! derived stream `(seed, i)` (see the core `rng` module for the pinned
//! derivation), so output bytes depend only on the command configuration and
//! never on the worker count.

pub mod suite;

use std::io::Write;

use ewens_cycles::error::{Error, Result};
use ewens_cycles::ewens::EwensParams;
use ewens_cycles::export;
use ewens_cycles::feller::{permutation_from_insertion, sample_bernoulli, sample_insertion};
use ewens_cycles::perm::Permutation;
use ewens_cycles::records::{record_permutation, sample_ptheta};
use ewens_cycles::rng::{Rng, Xoshiro256StarStar};
use ewens_cycles::shepp_lloyd::sample_random_size_ewens;
use ewens_cycles::stretch_ppp::{dynamic_sample, ppp_above_level, LevelWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Renders records `0..samples` with `workers` threads; each record comes
/// from its own derived stream, so any worker count yields identical bytes.
fn fan_out<F>(samples: u64, workers: usize, render: F) -> Result<Vec<u8>>
where
    F: Fn(u64) -> Result<Vec<u8>> + Sync,
{
    let workers = workers.clamp(1, samples.max(1) as usize);
    if workers == 1 {
        let mut out = Vec::new();
        for i in 0..samples {
            out.extend_from_slice(&render(i)?);
        }
        return Ok(out);
    }
    let chunk = samples.div_ceil(workers as u64);
    let mut buffers: Vec<Result<Vec<u8>>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers as u64 {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(samples);
            let render = &render;
            handles.push(scope.spawn(move || {
                let mut buf = Vec::new();
                for i in lo..hi {
                    buf.extend_from_slice(&render(i)?);
                }
                Ok(buf)
            }));
        }
        for h in handles {
            buffers.push(h.join().expect("worker panicked"));
        }
    });
    let mut out = Vec::new();
    for b in buffers {
        out.extend_from_slice(&b?);
    }
    Ok(out)
}

/// One permutation through the trial-insertion pipeline.
pub fn feller_permutation<R: Rng>(n: usize, params: EwensParams, rng: &mut R) -> Permutation {
    let trace = sample_bernoulli(n, params, rng);
    let ins = sample_insertion(&trace, rng);
    permutation_from_insertion(&ins).expect("sampled insertion is well formed")
}

pub fn render_feller(
    theta: f64,
    n: usize,
    samples: u64,
    seed: u64,
    format: OutputFormat,
    workers: usize,
) -> Result<Vec<u8>> {
    let params = EwensParams::new(theta)?;
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    let mut out = Vec::new();
    match format {
        OutputFormat::Json => writeln!(
            out,
            "{{\"command\":\"sample-feller\",\"theta\":{},\"n\":{n},\"samples\":{samples},\"seed\":{seed}}}",
            export::fmt_f64(theta)
        )
        .unwrap(),
        OutputFormat::Csv => {
            writeln!(out, "# command=sample-feller theta={theta} n={n} samples={samples} seed={seed}").unwrap();
            writeln!(out, "theta,n,bits,perm,cycle_counts").unwrap();
        }
    }
    let body = fan_out(samples, workers, |i| {
        let mut rng = Xoshiro256StarStar::stream(seed, i);
        let trace = sample_bernoulli(n, params, &mut rng);
        let ins = sample_insertion(&trace, &mut rng);
        let perm = permutation_from_insertion(&ins)?;
        let counts = perm.cycle_counts();
        let mut buf = Vec::new();
        match format {
            OutputFormat::Json => {
                export::feller_json(&mut buf, theta, trace.bits(), &perm, &counts)
            }
            OutputFormat::Csv => export::feller_csv(&mut buf, theta, trace.bits(), &perm, &counts),
        }
        .expect("write to Vec cannot fail");
        Ok(buf)
    })?;
    out.extend_from_slice(&body);
    Ok(out)
}

pub fn render_records(
    theta: f64,
    n: usize,
    samples: u64,
    seed: u64,
    format: OutputFormat,
    workers: usize,
) -> Result<Vec<u8>> {
    let params = EwensParams::new(theta)?;
    if n == 0 {
        return Err(Error::EmptyOrder);
    }
    let mut out = Vec::new();
    match format {
        OutputFormat::Json => writeln!(
            out,
            "{{\"command\":\"sample-records\",\"theta\":{},\"n\":{n},\"samples\":{samples},\"seed\":{seed}}}",
            export::fmt_f64(theta)
        )
        .unwrap(),
        OutputFormat::Csv => {
            writeln!(out, "# command=sample-records theta={theta} n={n} samples={samples} seed={seed}").unwrap();
            writeln!(out, "theta,n,u,records,perm").unwrap();
        }
    }
    let body = fan_out(samples, workers, |i| {
        let mut rng = Xoshiro256StarStar::stream(seed, i);
        let trace = sample_ptheta(n, params, &mut rng)?;
        let perm = record_permutation(&trace, n)?;
        let mut buf = Vec::new();
        match format {
            OutputFormat::Json => export::record_trace_json(&mut buf, theta, &trace, &perm),
            OutputFormat::Csv => export::record_trace_csv(&mut buf, theta, &trace, &perm),
        }
        .expect("write to Vec cannot fail");
        Ok(buf)
    })?;
    out.extend_from_slice(&body);
    Ok(out)
}

pub fn render_ppp(
    theta: f64,
    s: f64,
    samples: u64,
    seed: u64,
    format: OutputFormat,
    workers: usize,
) -> Result<Vec<u8>> {
    let window = LevelWindow::new(s, theta)?;
    let mut out = Vec::new();
    match format {
        OutputFormat::Json => {
            export::window_header_json(&mut out, s, theta, seed).unwrap();
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "# command=sample-ppp theta={theta} s={s} samples={samples} seed={seed}"
            )
            .unwrap();
            writeln!(out, "window,count,lengths,values").unwrap();
        }
    }
    let body = fan_out(samples, workers, |i| {
        let mut rng = Xoshiro256StarStar::stream(seed, i);
        let stretches = ppp_above_level(&window, &mut rng)?;
        let mut buf = Vec::new();
        match format {
            OutputFormat::Json => export::ppp_window_json(&mut buf, i, &stretches),
            OutputFormat::Csv => export::ppp_window_csv(&mut buf, i, &stretches),
        }
        .expect("write to Vec cannot fail");
        Ok(buf)
    })?;
    out.extend_from_slice(&body);
    Ok(out)
}

pub fn render_shepp_lloyd(
    theta: f64,
    p: f64,
    samples: u64,
    seed: u64,
    format: OutputFormat,
    workers: usize,
) -> Result<Vec<u8>> {
    let params = EwensParams::new(theta)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutsideUnitInterval {
            name: "p",
            value: p,
        });
    }
    let mut out = Vec::new();
    match format {
        OutputFormat::Json => writeln!(
            out,
            "{{\"command\":\"sample-shepp-lloyd\",\"theta\":{},\"p\":{},\"samples\":{samples},\"seed\":{seed}}}",
            export::fmt_f64(theta),
            export::fmt_f64(p)
        )
        .unwrap(),
        OutputFormat::Csv => {
            writeln!(out, "# command=sample-shepp-lloyd theta={theta} p={p} samples={samples} seed={seed}").unwrap();
            writeln!(out, "theta,p,size,cycle_counts").unwrap();
        }
    }
    let body = fan_out(samples, workers, |i| {
        let mut rng = Xoshiro256StarStar::stream(seed, i);
        let rsp = sample_random_size_ewens(params, p, &mut rng)?;
        let mut buf = Vec::new();
        match format {
            OutputFormat::Json => export::shepp_lloyd_json(&mut buf, theta, p, &rsp),
            OutputFormat::Csv => export::shepp_lloyd_csv(&mut buf, theta, p, &rsp),
        }
        .expect("write to Vec cannot fail");
        Ok(buf)
    })?;
    out.extend_from_slice(&body);
    Ok(out)
}

pub fn render_dynamic(theta_max: f64, s: f64, seed: u64, format: OutputFormat) -> Result<Vec<u8>> {
    let mut rng = Xoshiro256StarStar::stream(seed, 0);
    let sample = dynamic_sample(theta_max, s, &mut rng)?;
    let mut out = Vec::new();
    match format {
        OutputFormat::Json => {
            export::dynamic_header_json(&mut out, s, theta_max, seed).unwrap();
            for point in sample.points() {
                export::theta_point_json(&mut out, point).unwrap();
            }
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "# command=dynamic theta_max={theta_max} s={s} seed={seed}"
            )
            .unwrap();
            writeln!(out, "point,theta_coord,values").unwrap();
            for (i, point) in sample.points().iter().enumerate() {
                export::theta_point_csv(&mut out, i as u64, point).unwrap();
            }
        }
    }
    Ok(out)
}
