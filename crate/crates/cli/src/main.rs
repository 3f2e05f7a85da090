//! `regrad`: regularity radius from the command line.
//!
//! Every subcommand prints JSON on standard output. Exit status is 0 on
//! success, 1 for usage and input errors and 2 for numerical failures.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use regrad::bench::{generate, run_experiment, ExperimentConfig, Family, GeneratorSpec};
use regrad::bounds::compute_bounds;
use regrad::error::Error;
use regrad::finiteness::is_radius_infinite;
use regrad::matrix::{RadiusMatrix, SquareMatrix};
use regrad::radius::Tolerances;
use regrad::solve::{radius, MethodChoice};

#[derive(Parser, Debug)]
#[command(name = "regrad", version, about = "Regularity radius of real square matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute r(A, Delta).
    Radius {
        matrix: PathBuf,
        #[command(flatten)]
        delta: DeltaArgs,
        /// auto, full, orthant, tridiag or closed-form.
        #[arg(long, default_value = "auto")]
        method: MethodChoice,
        /// Include the orthant-search trajectory.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        eps_bisect: Option<f64>,
    },
    /// Lower and upper bounds on r(A, Delta).
    Bounds {
        matrix: PathBuf,
        #[command(flatten)]
        delta: DeltaArgs,
    },
    /// Decide whether r(A, Delta) is infinite.
    Finiteness {
        matrix: PathBuf,
        #[arg(long)]
        delta: PathBuf,
        /// Rank decisions in exact rational arithmetic.
        #[cfg(feature = "exact-rank")]
        #[arg(long)]
        exact: bool,
    },
    /// Run a full-search / orthant-search comparison.
    Bench {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw one random instance.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        instance: u32,
        #[arg(long, default_value_t = 0.10)]
        negate_fraction: f64,
        /// Also write A in the matrix text format.
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        /// Also write Delta in the matrix text format.
        #[arg(long)]
        delta_out: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct DeltaArgs {
    /// Radius matrix file; the all-ones matrix when omitted.
    #[arg(long, conflicts_with = "all_ones")]
    delta: Option<PathBuf>,
    #[arg(long)]
    all_ones: bool,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::DimensionMismatch { .. }
            | Error::StructureMismatch(_)
            | Error::ClassMismatch(_)
            | Error::NonpositiveWeights
            | Error::ZeroRadiusMatrix
            | Error::DimensionTooLarge { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<SquareMatrix, Failure> {
    SquareMatrix::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_delta(path: &Path) -> Result<RadiusMatrix, Failure> {
    RadiusMatrix::parse(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn delta_for(args: &DeltaArgs, n: usize) -> Result<RadiusMatrix, Failure> {
    match &args.delta {
        Some(path) => load_delta(path),
        None => Ok(RadiusMatrix::ones(n)),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result types serialise to JSON")
}

fn run(command: Command) -> Result<Value, Failure> {
    let mut tol = Tolerances::default();
    match command {
        Command::Radius { matrix, delta, method, trace, eps_bisect } => {
            if let Some(eps) = eps_bisect {
                tol.eps_bisect = eps;
            }
            let a = load_matrix(&matrix)?;
            let d = delta_for(&delta, a.n())?;
            let c = radius(&a, &d, method, &tol)?;
            let mut out = to_json(&c);
            if trace {
                out["trace"] = c.trace.as_ref().map(to_json).unwrap_or(Value::Null);
            }
            Ok(out)
        }
        Command::Bounds { matrix, delta } => {
            let a = load_matrix(&matrix)?;
            let d = delta_for(&delta, a.n())?;
            Ok(to_json(&compute_bounds(&a, &d, &tol)?))
        }
        #[cfg(not(feature = "exact-rank"))]
        Command::Finiteness { matrix, delta } => {
            let a = load_matrix(&matrix)?;
            Ok(to_json(&is_radius_infinite(&a, &load_delta(&delta)?, &tol)?))
        }
        #[cfg(feature = "exact-rank")]
        Command::Finiteness { matrix, delta, exact } => {
            let a = load_matrix(&matrix)?;
            let d = load_delta(&delta)?;
            let report = if exact {
                regrad::finiteness::is_radius_infinite_exact(&a, &d, &tol)?
            } else {
                is_radius_infinite(&a, &d, &tol)?
            };
            Ok(to_json(&report))
        }
        Command::Bench { config, output } => {
            let mut cfg = ExperimentConfig::parse(&read(&config)?)?;
            if output.is_some() {
                cfg.output = output;
            }
            let out = run_experiment(&cfg)?;
            Ok(json!({
                "schema": out.schema,
                "rows": out.rows.len(),
                "errors": out.rows.iter().filter(|r| r.error.is_some()).count(),
                "output": cfg.output,
                "summary": out.summary,
            }))
        }
        Command::Gen { family, n, seed, instance, negate_fraction, matrix_out, delta_out } => {
            let mut spec = GeneratorSpec::new(family, n, seed).with_instance(instance);
            spec.negate_fraction = negate_fraction;
            let (a, d) = generate(&spec)?;
            for (path, text) in [(matrix_out, a.to_text()), (delta_out, d.to_text())] {
                if let Some(path) = path {
                    fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                }
            }
            Ok(json!({
                "family": family,
                "n": n,
                "seed": seed,
                "instance": instance,
                "a": a.rows(),
                "delta": d.rows(),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values always serialise");
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
