//! Command-line front end.
//!
//! Data goes to `--output` (or standard output), diagnostics and summaries to
//! standard error. Exit codes: 0 success, 1 usage, 2 I/O, 3 invalid state,
//! 4 failed check.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::measures::measure;
use crate::mems::{
    boundary_entropy, critical_entropy, critical_entropy_exact, mems_state, EXACT_CRITICAL_MAX_QUBITS,
};
use crate::oracle::run_suite;
use crate::sampling::{
    fmt_f64, sweep_sharded, DiagonalDistribution, SamplerConfig, SweepCsvWriter, SweepSummary,
};
use crate::xstate::{StateFile, StateFileError, XState, VALIDATION_TOLERANCE};

#[derive(Debug, Parser)]
#[command(
    name = "xmems",
    version,
    about = "Entanglement and mixedness of N-qubit X-states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo sweep of random X-states, written as CSV.
    Sweep(SweepArgs),
    /// Maximal entropy as a function of concurrence.
    Boundary(BoundaryArgs),
    /// Build a maximally entangled mixed X-state.
    Mems(MemsArgs),
    /// Critical entropy for N = 2..=max-n.
    Scr(ScrArgs),
    /// Entropy and concurrence of a state read from a JSON file.
    Measure(MeasureArgs),
    /// Cross-check the closed forms against brute-force oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Number of qubits.
    #[arg(long = "n")]
    pub n_qubits: u32,
    #[arg(long)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads; the output does not depend on this.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// Diagonal law: flat-simplex or dominant-block.
    #[arg(long, default_value = "flat-simplex")]
    pub law: DiagonalDistribution,
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    #[arg(long = "n")]
    pub n_qubits: u32,
    /// Number of evenly spaced concurrence values in [0, 1].
    #[arg(long)]
    pub grid: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MemsArgs {
    #[arg(long = "n")]
    pub n_qubits: u32,
    /// Real part of the coherence γ; the concurrence is 2|γ|.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_im: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScrArgs {
    #[arg(long, default_value_t = 20)]
    pub max_n: u32,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "n")]
    pub n_qubits: u32,
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Diagonal law: flat-simplex or dominant-block.
    #[arg(long, default_value = "flat-simplex")]
    pub law: DiagonalDistribution,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::InvalidState(_) => 3,
            CliError::CheckFailed(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn open_output<'a>(path: Option<&Path>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(a) => run_sweep(&a, stdout, stderr),
        Command::Boundary(a) => run_boundary(&a, stdout),
        Command::Mems(a) => run_mems(&a, stdout),
        Command::Scr(a) => run_scr(&a, stdout),
        Command::Measure(a) => run_measure(&a, stdout, stderr),
        Command::Verify(a) => run_verify(&a, stdout),
    }
}

/// Writes `index,entropy,concurrence` rows and a JSON summary line on
/// `stderr`. Fails with [`CliError::CheckFailed`] if any entangled record
/// lies above the boundary curve.
pub fn run_sweep(args: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let config = SamplerConfig::new(args.n_qubits, args.count, args.seed)?.with_diagonal(args.law);
    if args.shards == 0 {
        return Err(CliError::Usage("--shards must be at least 1".into()));
    }
    let out = open_output(args.output.as_deref(), stdout)?;
    let mut csv = SweepCsvWriter::new(out)?;
    let mut summary = SweepSummary::new(args.n_qubits)?;
    let mut io_err = None;
    sweep_sharded(&config, args.shards, |r| {
        summary.push(&r);
        if let Err(e) = csv.write(&r) {
            io_err = Some(e);
            return Err(Error::Domain("write failed".into()));
        }
        Ok(())
    })
    .map_err(|e| match io_err.take() {
        Some(io) => CliError::Io(io),
        None => e.into(),
    })?;
    csv.finish()?;
    writeln!(
        stderr,
        "{}",
        serde_json::to_string(&summary).expect("summary serialises")
    )?;
    if summary.boundary_violations > 0 || summary.beyond_critical > 0 {
        return Err(CliError::CheckFailed(format!(
            "{} boundary violations, {} entangled records beyond the critical entropy",
            summary.boundary_violations, summary.beyond_critical
        )));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct BoundaryRow {
    concurrence: f64,
    entropy: f64,
}

/// Boundary curve sampled at `grid` concurrences `2|γ|`, `|γ|` evenly
/// spaced on `[0, 1/2]`. The first row is `(0, S_cr)`, the last `(1, 0)`.
pub fn run_boundary(args: &BoundaryArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.grid < 2 {
        return Err(CliError::Usage(format!(
            "--grid must be at least 2, got {}",
            args.grid
        )));
    }
    let rows = (0..args.grid)
        .map(|k| {
            let gamma = if k + 1 == args.grid {
                0.5
            } else {
                0.5 * k as f64 / (args.grid - 1) as f64
            };
            Ok(BoundaryRow {
                concurrence: 2.0 * gamma,
                entropy: boundary_entropy(args.n_qubits, gamma)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut out = open_output(args.output.as_deref(), stdout)?;
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["concurrence", "entropy"])?;
            for r in &rows {
                w.write_record([fmt_f64(r.concurrence), fmt_f64(r.entropy)])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer(&mut out, &rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct MemsOutput<'a> {
    point: crate::mems::MemsPoint,
    state: &'a StateFile,
}

pub fn run_mems(args: &MemsArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let (point, state) = mems_state(args.n_qubits, Complex64::new(args.gamma, args.gamma_im))?;
    let file = StateFile::from(&state);
    let mut out = open_output(args.output.as_deref(), stdout)?;
    serde_json::to_writer(&mut out, &MemsOutput { point, state: &file }).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ScrRow {
    n_qubits: u32,
    fraction: String,
    decimal: f64,
}

pub fn run_scr(args: &ScrArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(2..=EXACT_CRITICAL_MAX_QUBITS).contains(&args.max_n) {
        return Err(CliError::Usage(format!(
            "--max-n must lie in 2..={EXACT_CRITICAL_MAX_QUBITS}, got {}",
            args.max_n
        )));
    }
    let rows = (2..=args.max_n)
        .map(|n| {
            let (num, den) = critical_entropy_exact(n)?;
            Ok(ScrRow {
                n_qubits: n,
                fraction: format!("{num}/{den}"),
                decimal: critical_entropy(n)?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut out = open_output(args.output.as_deref(), stdout)?;
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["n_qubits", "fraction", "decimal"])?;
            for r in &rows {
                w.write_record([r.n_qubits.to_string(), r.fraction.clone(), fmt_f64(r.decimal)])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer(&mut out, &rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct MeasureOutput {
    entropy: f64,
    concurrence: f64,
    argmax_index: usize,
    valid: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    violations: Vec<crate::xstate::Violation>,
}

/// Prints `{entropy, concurrence, argmax_index, valid}` for the state in
/// `args.input`. Invalid states still get their numbers printed, followed by
/// exit code 3.
pub fn run_measure(
    args: &MeasureArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)?;
    let state = XState::from_json_str(&text).map_err(|e| match e {
        StateFileError::Parse(p) => CliError::Usage(format!(
            "{}: line {}, column {}: {p}",
            args.input.display(),
            p.line(),
            p.column()
        )),
        StateFileError::Shape(s) => CliError::Usage(format!("{}: {s}", args.input.display())),
    })?;
    let report = state.validate(VALIDATION_TOLERANCE)?;
    let m = measure(&state);
    let out = MeasureOutput {
        entropy: m.entropy,
        concurrence: m.concurrence,
        argmax_index: m.argmax_index,
        valid: report.is_ok(),
        violations: report.violations.clone(),
    };
    serde_json::to_writer(&mut *stdout, &out).map_err(io::Error::from)?;
    writeln!(stdout)?;
    if !report.is_ok() {
        writeln!(stderr, "{report}")?;
        return Err(CliError::InvalidState(report.to_string()));
    }
    Ok(())
}

/// Runs the oracle suite and prints one JSON line per report.
pub fn run_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = SamplerConfig::new(args.n_qubits, args.count, args.seed)?.with_diagonal(args.law);
    let reports = run_suite(&config)?;
    for r in &reports {
        writeln!(stdout, "{}", r.to_json_line())?;
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.check_name.as_str())
        .collect();
    if !failed.is_empty() {
        return Err(CliError::CheckFailed(format!(
            "failed checks: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}
