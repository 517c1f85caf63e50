//! Batch driver: `verify`, `constants`, `eval` and `report` subcommands.

pub mod config;
pub mod output;
pub mod suites;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

pub use config::{FileConfig, Format, Overrides, RunConfig};
pub use output::Summary;
pub use suites::Suite;

use crate::harmonic::{poisson_kernel, ExtremalFunction, ScalarField};
use crate::lab::{ball_volume, liu_constant, liu_constant_n3, sharp_gradient_constant, zhang_constant};
use crate::mobius::{hyperbolic_metric, mobius_map, pseudo_metric};
use crate::point::require_interior;
use crate::report::CheckReport;

/// Exit status when an asserting check fails.
pub const EXIT_FAILED: u8 = 1;
/// Exit status for usage, configuration and I/O errors.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "hyperharm", version, about = "Seeded numerical verification of Schwarz-type inequalities in the unit ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run check suites and write a report.
    Verify(VerifyArgs),
    /// Print the gradient constants for the given dimensions.
    Constants {
        /// Dimensions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Evaluate the Möbius map, Poisson kernel, distances and extremal function.
    Eval(EvalArgs),
    /// Re-summarize an existing JSON or CSV report.
    Report {
        path: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite names, comma separated or repeated; `all` runs every suite.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Dimensions, comma separated (defaults depend on the suite).
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Trials per suite and dimension.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed; defaults to HYPERHARM_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Approximate node count of the sphere quadrature.
    #[arg(long)]
    pub quad_size: Option<usize>,
    /// Sample points per constructed field in the zhang suite.
    #[arg(long)]
    pub points_per_field: Option<usize>,
    /// Absolute tolerance override, CHECK=TOL; may be repeated.
    #[arg(long = "tol", value_parser = config::parse_tolerance)]
    pub tolerances: Vec<(String, f64)>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Report path; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON config file mirroring these flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Point of the ball, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Möbius center.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<f64>>,
    /// Second point, for the distances.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Option<Vec<f64>>,
    /// Boundary point, for the Poisson kernel.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Option<Vec<f64>>,
    /// Value f(a) of the extremal function.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
}

/// Records in canonical order with their summary.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub records: Vec<CheckReport>,
    pub summary: Summary,
    pub elapsed: Duration,
}

/// Runs the configured suites and sorts the records.
pub fn run(config: &RunConfig) -> anyhow::Result<RunOutcome> {
    config.validate()?;
    let start = Instant::now();
    let mut records = suites::run_suites(config)?;
    output::sort_records(&mut records);
    let mut summary = Summary::from_records(&records);
    summary.config = Some(output::config_echo(config));
    Ok(RunOutcome {
        records,
        summary,
        elapsed: start.elapsed(),
    })
}

/// Runs `config` and writes the report to its output path (or `out`).
/// Returns whether every asserting check passed.
pub fn verify(config: &RunConfig, out: &mut dyn Write) -> anyhow::Result<bool> {
    let outcome = run(config)?;
    match &config.output {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("cannot write report {}", path.display()))?;
            let mut w = std::io::BufWriter::new(file);
            output::write_report(&mut w, config.format, &outcome.records, &outcome.summary)?;
            w.flush().with_context(|| format!("cannot write report {}", path.display()))?;
            let c = &outcome.summary.counts;
            writeln!(
                out,
                "{}: {} records, {} asserting, {} failed, {} informational",
                outcome.summary.status, c.total, c.asserting, c.failed, c.informational
            )?;
            writeln!(out, "report: {}", path.display())?;
            writeln!(out, "runtime: {:.3} s", outcome.elapsed.as_secs_f64())?;
        }
        None => {
            output::write_report(out, config.format, &outcome.records, &outcome.summary)?;
            eprintln!("runtime: {:.3} s", outcome.elapsed.as_secs_f64());
        }
    }
    Ok(outcome.summary.passed())
}

fn verify_args(args: VerifyArgs) -> anyhow::Result<RunConfig> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let flags = Overrides {
        suites: args.suite,
        dims: args.dims,
        trials: args.trials,
        seed: args.seed,
        quad_size: args.quad_size,
        points_per_field: args.points_per_field,
        tolerances: args.tolerances,
        output: args.output,
        format: args.format,
    };
    let env = std::env::var(config::SEED_ENV).ok();
    RunConfig::resolve(file, flags, env.as_deref())
}

pub fn write_constants(out: &mut dyn Write, dims: &[usize]) -> anyhow::Result<()> {
    for (i, &n) in dims.iter().enumerate() {
        if n == 0 {
            anyhow::bail!("n must be at least 1");
        }
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(out, "n = {n}")?;
        writeln!(out, "ball_volume = {}", ball_volume(n))?;
        writeln!(out, "liu_constant = {}", liu_constant(n))?;
        if n == 3 {
            writeln!(out, "liu_constant_n3 = {} (8/(3 sqrt 3))", liu_constant_n3())?;
        }
        writeln!(out, "sharp_gradient_constant = {}", sharp_gradient_constant(n))?;
        writeln!(out, "zhang_constant = {}", zhang_constant(n))?;
    }
    Ok(())
}

pub fn evaluate(args: &EvalArgs) -> anyhow::Result<serde_json::Value> {
    let x = &args.x;
    require_interior(x)?;
    let mut obj = serde_json::Map::new();
    obj.insert("x".into(), serde_json::json!(x));
    if let Some(a) = &args.a {
        crate::point::same_dim(x.len(), a.len())?;
        require_interior(a)?;
        obj.insert("phi_a_x".into(), serde_json::json!(mobius_map(a, x)));
    }
    if let Some(xi) = &args.xi {
        obj.insert("poisson_kernel".into(), serde_json::json!(poisson_kernel(x, xi)?));
    }
    if let Some(y) = &args.y {
        obj.insert("pseudo_metric".into(), serde_json::json!(pseudo_metric(x, y)?));
        obj.insert("hyperbolic_metric".into(), serde_json::json!(hyperbolic_metric(x, y)?));
    }
    if let (Some(a), Some(xi)) = (&args.a, &args.xi) {
        let f = ExtremalFunction::new(a, xi, args.scale)?;
        obj.insert("extremal".into(), serde_json::json!(f.value(x)));
        obj.insert("extremal_gradient".into(), serde_json::json!(f.gradient(x)));
    }
    Ok(serde_json::Value::Object(obj))
}

fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Verify(args) => verify(&verify_args(args)?, &mut out),
        Command::Constants { n } => write_constants(&mut out, &n).map(|_| true),
        Command::Eval(args) => {
            writeln!(out, "{}", serde_json::to_string_pretty(&evaluate(&args)?)?)?;
            Ok(true)
        }
        Command::Report { path } => {
            let records = output::read_records(&path)?;
            let summary = Summary::from_records(&records);
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
            Ok(summary.passed())
        }
    }
}

/// Entry point of the `hyperharm` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
