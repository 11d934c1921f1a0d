//! `nclab`: numerical checks for free scalar two-point functions on
//! commutative and twisted spacetime.
//!
//! Every subcommand evaluates one family of quantities, writes a JSON
//! report (and usually a CSV table, optionally SVG plots) under the output
//! directory, prints a short summary, and exits with:
//!
//! - `0` — the command's pass criterion held (or `--help`/`--version`),
//! - `1` — unusable flags or configuration,
//! - `2` — a tolerance was missed or a computation failed.
//!
//! All randomness is seeded (`--seed`, default 42) and all quadrature is
//! deterministic, so reruns with `SOURCE_DATE_EPOCH` pinned reproduce the
//! output files byte for byte; the JSON `wallTime` line is the one
//! intentional exception. `NCLAB_THREADS` caps the scan worker pool
//! without affecting any emitted number.

mod commands;
mod config;
mod plot;
mod report;
mod sampling;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::commands::{algebra, boundary, evals, identity, scan};
use crate::config::{parse_theta_pair, Overrides, Settings};
use crate::report::{timestamp, write_output, Format, Output};

/// Failure modes separated by exit code: configuration problems exit 1,
/// computation problems exit 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Compute(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Compute(m) => write!(f, "compute error: {m}"),
        }
    }
}

/// Maps a core-library failure into the compute exit path.
pub(crate) fn core_error(e: nclab_core::Error) -> CliError {
    CliError::Compute(format!("core computation failed: {e:?}"))
}

#[derive(clap::Args, Debug, Default)]
struct GlobalArgs {
    /// TOML config file (flags override file values)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Field mass (default 1.0)
    #[arg(long, global = true)]
    mass: Option<f64>,
    /// Standard two-block twist parameters "L1,L2" (default 1,1)
    #[arg(long, global = true, value_name = "L1,L2")]
    theta: Option<String>,
    /// Output directory for reports (default "out")
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Which data files to write
    #[arg(long, global = true, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Seed for randomized checks (default 42)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative quadrature tolerance (overrides the per-dimension defaults)
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    /// Evaluation budget per integral
    #[arg(long, global = true)]
    max_evals: Option<u64>,
    /// Also write SVG plots
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the closed-form damped weight e^{-omega x4}/(2 omega) against
    /// its frequency-line integral over a mass/momentum/time grid
    VerifyIdentity3(identity::IdentityArgs),
    /// Extrapolate the exponentially damped momentum pairing to zero
    /// damping and compare with the undamped packet smearing
    BoundaryLimit(boundary::BoundaryArgs),
    /// Scan regulated one-loop integrals over external momenta and
    /// cutoffs, fitting the growth in the cutoff and the momentum falloff
    TadpoleScan(scan::ScanArgs),
    /// Associativity of the twisted plane-wave products: exactly zero
    /// off-shell, measured and anchored on-shell
    AssocCheck(algebra::AssocArgs),
    /// Joint-reflection evenness of the pair kernels: exactly zero
    /// untwisted and off-shell, measured and anchored on-shell
    ReflectionCheck(algebra::ReflectArgs),
    /// Enumerate perfect pair contractions of n fields and check the
    /// (n-1)!! count
    Wick(algebra::WickArgs),
    /// Evaluate the Euclidean position-space kernel on a radius grid
    SchwingerEval(evals::SchwingerArgs),
    /// Evaluate the star product of two fixed Gaussian packets
    StarEval(evals::StarArgs),
    /// Run every check with reduced budgets and write a combined summary
    ReportAll,
}

#[derive(Parser, Debug)]
#[command(
    name = "nclab",
    version,
    about = "Numerical checks for scalar two-point functions on twisted spacetime"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

fn dispatch(settings: &Settings, cmd: &Command) -> Result<Output, CliError> {
    match cmd {
        Command::VerifyIdentity3(a) => identity::run(settings, a),
        Command::BoundaryLimit(a) => boundary::run(settings, a),
        Command::TadpoleScan(a) => scan::run(settings, a),
        Command::AssocCheck(a) => algebra::run_assoc(settings, a),
        Command::ReflectionCheck(a) => algebra::run_reflection(settings, a),
        Command::Wick(a) => algebra::run_wick(settings, a),
        Command::SchwingerEval(a) => evals::run_schwinger(settings, a),
        Command::StarEval(a) => evals::run_star(settings, a),
        Command::ReportAll => unreachable!("handled by run_report_all"),
    }
}

/// Writes one command's output and prints its summary; returns its pass
/// flag.
fn finish(
    settings: &Settings,
    stamp: &str,
    global: &GlobalArgs,
    wall_time: f64,
    out: &Output,
) -> Result<bool, CliError> {
    let written = write_output(settings, stamp, global.format, global.svg, wall_time, out)?;
    for line in &out.summary {
        println!("{}: {line}", out.command);
    }
    for path in &written {
        println!("{}: wrote {}", out.command, path.display());
    }
    println!(
        "{}: {} ({wall_time:.2}s)",
        out.command,
        if out.pass { "PASS" } else { "FAIL" }
    );
    Ok(out.pass)
}

/// Reduced-budget run of every subcommand plus a combined summary report.
fn run_report_all(
    settings: &Settings,
    stamp: &str,
    global: &GlobalArgs,
) -> Result<bool, CliError> {
    let jobs: Vec<Command> = vec![
        Command::VerifyIdentity3(identity::IdentityArgs::default()),
        Command::BoundaryLimit(boundary::BoundaryArgs {
            packets: Some(3),
            ..boundary::BoundaryArgs::default()
        }),
        Command::TadpoleScan(scan::ScanArgs {
            k_norms: Some("0.5,1,2".into()),
            cutoffs: Some("10:40:3".into()),
            ..scan::ScanArgs::default()
        }),
        Command::AssocCheck(algebra::AssocArgs {
            triples: Some(300),
            ..algebra::AssocArgs::default()
        }),
        Command::ReflectionCheck(algebra::ReflectArgs {
            points: Some(300),
        }),
        Command::Wick(algebra::WickArgs::default()),
        Command::SchwingerEval(evals::SchwingerArgs {
            r_grid: Some("0.3:3:7".into()),
        }),
        Command::StarEval(evals::StarArgs::default()),
    ];

    let total = Instant::now();
    let mut all_pass = true;
    let mut entries = Vec::new();
    for cmd in &jobs {
        let t = Instant::now();
        let out = dispatch(settings, cmd)?;
        let wall = t.elapsed().as_secs_f64();
        let pass = finish(settings, stamp, global, wall, &out)?;
        all_pass &= pass;
        entries.push(serde_json::json!({
            "command": out.command,
            "pass": pass,
        }));
    }

    let summary = Output {
        command: "report-all",
        pass: all_pass,
        results: serde_json::json!({ "commands": entries }),
        csv: None,
        plots: Vec::new(),
        summary: vec![format!(
            "{} commands, all passing = {all_pass}",
            jobs.len()
        )],
    };
    finish(settings, stamp, global, total.elapsed().as_secs_f64(), &summary)
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let overrides = Overrides {
        mass: cli.global.mass,
        theta: cli
            .global
            .theta
            .as_deref()
            .map(parse_theta_pair)
            .transpose()?,
        seed: cli.global.seed,
        out: cli.global.out.clone(),
        rel_tol: cli.global.rel_tol,
        max_evals: cli.global.max_evals,
    };
    let settings = Settings::resolve(cli.global.config.as_deref(), &overrides)?;
    let stamp = timestamp();
    match &cli.command {
        Command::ReportAll => run_report_all(&settings, &stamp, &cli.global),
        cmd => {
            let t = Instant::now();
            let out = dispatch(&settings, cmd)?;
            finish(&settings, &stamp, &cli.global, t.elapsed().as_secs_f64(), &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e @ CliError::Config(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e @ CliError::Compute(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
