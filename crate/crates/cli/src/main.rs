//! Command-line driver: sampling commands stream one record per line in JSON
//! or CSV; `verify` runs the verification suite and exits nonzero on any
//! failure.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime
//! error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ewens_cycles::error::Error;
use ewens_cycles_cli::suite::{self, SuiteSelection, DEFAULT_SEED};
use ewens_cycles_cli::OutputFormat;

/// Environment variable naming the directory that relative `--out` paths are
/// resolved against.
const OUT_DIR_ENV: &str = "EWENS_CYCLES_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "ewens-cycles",
    version,
    about = "Samplers and cross-checks for random permutations with Ewens cycle structure",
    after_help = "Relative --out paths are resolved against $EWENS_CYCLES_OUT_DIR when it is set.\n\
                  Record i of a sampling command is generated from the stream derived from\n\
                  (seed, i), so outputs are byte-reproducible and independent of --workers.\n\
                  Output schemas are documented in FORMATS.md."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    /// Enumeration-based checks only.
    Exact,
    /// Monte Carlo checks only.
    Sampling,
    /// Everything.
    All,
}

impl From<SuiteArg> for SuiteSelection {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Exact => SuiteSelection::Exact,
            SuiteArg::Sampling => SuiteSelection::Sampling,
            SuiteArg::All => SuiteSelection::All,
        }
    }
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Number of records to emit.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    /// Master seed; recorded in the output header.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; never affects the output bytes.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Sample permutations through the Bernoulli-trial insertion coupling.
    SampleFeller {
        /// Ewens parameter (> 0).
        #[arg(long)]
        theta: f64,
        /// Order of the sampled permutations.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample permutations through the lower-record construction.
    SampleRecords {
        /// Ewens parameter (> 0).
        #[arg(long)]
        theta: f64,
        /// Length of each sampled prefix.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample the stretch point process above a level.
    SamplePpp {
        /// Intensity multiplier (> 0).
        #[arg(long)]
        theta: f64,
        /// Level in (0, 1); stretches start above it.
        #[arg(long)]
        s: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample random-size permutations (negative binomial size law).
    SampleSheppLloyd {
        /// Ewens parameter (> 0).
        #[arg(long)]
        theta: f64,
        /// Stopping level in (0, 1).
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample the product process coupling all theta values up to a maximum.
    Dynamic {
        /// Upper end of the coupled theta range (> 0).
        #[arg(long)]
        theta_max: f64,
        /// Level in (0, 1).
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite and print a verdict table.
    Verify {
        /// Which checks to run.
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also emit one JSON verdict per line to stdout.
        #[arg(long)]
        json: bool,
    },
}

fn resolve_out(path: PathBuf) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            return PathBuf::from(dir).join(path);
        }
    }
    path
}

fn emit(bytes: &[u8], out: Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(resolve_out(path), bytes),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)?;
            lock.flush()
        }
    }
}

/// Usage-level errors (bad parameter domains) exit 2; runtime failures 3.
fn classify(err: &Error) -> u8 {
    match err {
        Error::InvalidTheta(_)
        | Error::OutsideUnitInterval { .. }
        | Error::OrderTooLarge { .. }
        | Error::EmptyOrder
        | Error::InvalidLambda(_) => 2,
        _ => 3,
    }
}

fn run() -> Result<u8, (u8, String)> {
    let cli = Cli::parse();
    let render =
        |result: Result<Vec<u8>, Error>, out: Option<PathBuf>| -> Result<u8, (u8, String)> {
            let bytes = result.map_err(|e| (classify(&e), e.to_string()))?;
            emit(&bytes, out).map_err(|e| (3, e.to_string()))?;
            Ok(0)
        };

    match cli.command {
        Command::SampleFeller { theta, n, common } => render(
            ewens_cycles_cli::render_feller(
                theta,
                n,
                common.samples,
                common.seed,
                common.format.into(),
                common.workers,
            ),
            common.out,
        ),
        Command::SampleRecords { theta, n, common } => render(
            ewens_cycles_cli::render_records(
                theta,
                n,
                common.samples,
                common.seed,
                common.format.into(),
                common.workers,
            ),
            common.out,
        ),
        Command::SamplePpp { theta, s, common } => render(
            ewens_cycles_cli::render_ppp(
                theta,
                s,
                common.samples,
                common.seed,
                common.format.into(),
                common.workers,
            ),
            common.out,
        ),
        Command::SampleSheppLloyd { theta, p, common } => render(
            ewens_cycles_cli::render_shepp_lloyd(
                theta,
                p,
                common.samples,
                common.seed,
                common.format.into(),
                common.workers,
            ),
            common.out,
        ),
        Command::Dynamic {
            theta_max,
            s,
            seed,
            format,
            out,
        } => render(
            ewens_cycles_cli::render_dynamic(theta_max, s, seed, format.into()),
            out,
        ),
        Command::Verify { suite, seed, json } => {
            let reports = suite::run_suite(suite.into(), seed);
            print!("{}", suite::format_report_table(&reports));
            if json {
                for report in &reports {
                    for v in &report.verdicts {
                        println!("{}", v.to_json());
                    }
                }
            }
            let all_pass = reports.iter().all(|r| r.passed());
            let (passed, total) = (reports.iter().filter(|r| r.passed()).count(), reports.len());
            println!("{passed}/{total} criteria passed (seed {seed})");
            Ok(u8::from(!all_pass))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
