//! `krein-ext`: instance generation, verification suites and grid reports.

mod gen;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use krein_ext::json::{self, GridJson, PassiveSystemJson};
use krein_ext::numcore::Tolerance;
use krein_ext::verify::{verify, Suite, VerificationReport, VerifyConfig};
use krein_ext::Error;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "krein-ext", version, about = "Selfadjoint contractive extensions: generators and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one seeded random instance as JSON.
    Gen(GenArgs),
    /// Run a verification suite over seeded random instances.
    Verify(VerifyArgs),
    /// Evaluate a passive system on a grid of points in the unit disk.
    Report(ReportArgs),
}

#[derive(Args)]
struct Output {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: gen::Kind,
    /// Comma-separated dimensions; their meaning depends on the kind.
    #[arg(long, value_delimiter = ',', required = true)]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// For passive_system: a general (not selfadjoint) contraction block.
    #[arg(long)]
    general: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Comma-separated candidate dimensions; each instance draws one.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8")]
    dims: Vec<usize>,
    /// Failure threshold (each suite has its own default).
    #[arg(long, env = "KREIN_EXT_TOL")]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock runtime in the report.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReportArgs {
    /// Passive system JSON.
    #[arg(long)]
    system: PathBuf,
    /// Evaluation grid JSON `{"points": [[re, im], ...]}`.
    #[arg(long)]
    points: PathBuf,
    #[arg(long, env = "KREIN_EXT_TOL", default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

/// Input or usage problems (exit 2), as opposed to failed identities (exit 1).
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn emit(output: &Output, text: &str) -> Result<(), UsageError> {
    let mut text = text.to_string();
    text.push('\n');
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, UsageError> {
    Ok(json::to_string(value)?)
}

fn run_gen(args: &GenArgs) -> Result<bool, UsageError> {
    let text = gen::generate(args.kind, &args.dims, args.seed, args.general, &Tolerance::default())?;
    emit(&args.output, &text)?;
    Ok(true)
}

fn run_verify(args: &VerifyArgs) -> Result<bool, UsageError> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse()?]
    };
    let mut reports: Vec<VerificationReport> = Vec::with_capacity(suites.len());
    for suite in suites {
        let config = VerifyConfig {
            count: args.count,
            dims: args.dims.clone(),
            tol: args.tol,
            seed: args.seed,
            timing: args.timing,
            ..VerifyConfig::new(suite)
        };
        reports.push(verify(&config)?);
    }
    let passed = reports.iter().all(VerificationReport::passed);
    let text = if reports.len() == 1 {
        to_json(&reports[0])?
    } else {
        to_json(&reports)?
    };
    emit(&args.output, &text)?;
    Ok(passed)
}

fn run_report(args: &ReportArgs) -> Result<bool, UsageError> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(UsageError(format!("tol must be positive, got {}", args.tol)));
    }
    let tol = Tolerance::default();
    let sys: PassiveSystemJson = json::from_str(&read(&args.system)?)?;
    let sys = sys.decode(&tol)?;
    let grid: GridJson = json::from_str(&read(&args.points)?)?;
    let rep = report::grid_report(&sys, &grid.points(), args.tol, &tol)?;
    emit(&args.output, &to_json(&rep)?)?;
    Ok(rep.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Verify(args) => run_verify(args),
        Command::Report(args) => run_report(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
