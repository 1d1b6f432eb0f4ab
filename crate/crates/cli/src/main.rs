//! `aqec`: sweeps, invariant suites, frame reports and single-instance reports.
//!
//! Exit codes: 0 when every invariant holds, 1 when one fails (the invariant
//! is named on stderr), 2 for a bad configuration or input file.

mod config;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aqec::bounds::{BoundReport, Certificates, Violation};
use aqec::icpovm::{self, FrameKind};
use aqec::recovery;
use aqec::report::{fmt_sig, Cell, Table};
use aqec::sample::derive_seed;
use aqec::verify::{self, Suite, SuiteReport};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use config::{FileConfig, InstanceFlags, SearchFlags, SweepConfig};
use output::Format;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Violation(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "error: {m}"),
            Self::Violation(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Violation(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "aqec", version, about = "Entanglement measures and error-correction fidelity bounds for quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a channel family over a parameter grid, one report row per point.
    Run(RunArgs),
    /// Run a seeded invariant suite.
    Verify(VerifyArgs),
    /// Report rank, dual norms, K and reconstruction error of an IC POVM.
    Frames(FramesArgs),
    /// Full report on a single instance.
    Inspect(RunArgs),
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    seed: Option<u64>,
    /// Restarts for the entanglement-of-formation search.
    #[arg(long)]
    eof_restarts: Option<usize>,
    /// Ensemble size for the entanglement-of-formation search.
    #[arg(long)]
    eof_ensemble_size: Option<usize>,
    /// Restarts for the classical-correlation search.
    #[arg(long)]
    cc_restarts: Option<usize>,
    /// Restarts for the recovery-channel search.
    #[arg(long)]
    recovery_restarts: Option<usize>,
    /// Convergence tolerance of every search.
    #[arg(long)]
    tol: Option<f64>,
}

impl SearchArgs {
    fn flags(&self) -> SearchFlags {
        SearchFlags {
            seed: self.seed,
            eof_restarts: self.eof_restarts,
            eof_ensemble_size: self.eof_ensemble_size,
            cc_restarts: self.cc_restarts,
            recovery_restarts: self.recovery_restarts,
            tol: self.tol,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Include optimal ensembles and measurements in JSON output.
    #[arg(long)]
    certificates: bool,
}

#[derive(Args)]
struct RunArgs {
    /// Family name (depolarizing, amplitude_damping, phase_damping, random_rank_k) or a JSON channel file.
    #[arg(long)]
    channel: Option<String>,
    /// Grid as name=start:stop:step, name=v1,v2,... or name=v.
    #[arg(long)]
    param: Option<String>,
    /// Input dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Output dimension for random_rank_k; defaults to --dim.
    #[arg(long)]
    out_dim: Option<usize>,
    /// Input state: maximally_mixed, pure or random.
    #[arg(long)]
    input: Option<String>,
    /// Cap on output times environment dimension.
    #[arg(long)]
    max_dim: Option<usize>,
    /// JSON file with defaults for any of these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// identities, pinsker, frames, eof, monogamy, chain, bounds or gap.
    #[arg(long)]
    suite: String,
    /// Number of seeded instances.
    #[arg(long)]
    seeds: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FramesArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// sic, mub, clifford, weyl_heisenberg or default.
    #[arg(long, default_value = "sic")]
    frame: String,
    /// JSON POVM file, used instead of --frame.
    #[arg(long)]
    povm: Option<PathBuf>,
    /// Random matrices used for the reconstruction residual.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn file_config(path: Option<&Path>) -> Result<FileConfig, CliError> {
    path.map_or(Ok(FileConfig::default()), config::load_file_config)
}

/// Summary lines go to stdout when the report itself goes to a file.
fn note(to_stdout: bool, line: &str) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("AQEC_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("AQEC_THREADS must be a positive integer (got '{v}')")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

struct Instance {
    value: Option<f64>,
    report: BoundReport,
    violations: Vec<Violation>,
}

fn evaluate(args: &RunArgs) -> Result<(SweepConfig, Vec<Instance>), CliError> {
    let file = file_config(args.config.as_deref())?;
    let flags = InstanceFlags {
        channel: args.channel.clone(),
        param: args.param.clone(),
        dim: args.dim,
        out_dim: args.out_dim,
        input: args.input.clone(),
        max_dim: args.max_dim,
    };
    let cfg = SweepConfig::resolve(&flags, &args.search.flags(), &file)?;
    let rows = (0..cfg.grid.len())
        .into_par_iter()
        .map(|i| {
            let ch = cfg.channel(i)?;
            let rho = cfg.input_state(ch.in_dim());
            let mut opts = cfg.search.verify_options(derive_seed(cfg.search.seed, i as u64 + 1));
            opts.certificates = args.output.certificates;
            let report = recovery::verify_instance(&rho, &ch, &opts)
                .map_err(|e| CliError::Config(format!("row {i}: {e}")))?;
            let violations = report.violations();
            Ok(Instance { value: cfg.grid[i], report, violations })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((cfg, rows))
}

fn report_table(cfg: &SweepConfig, rows: &[Instance]) -> Table {
    let fields: Vec<&str> = rows[0].report.csv_fields().into_iter().map(|(k, _)| k).collect();
    let mut columns = vec!["row", cfg.param_name.as_str(), "channel"];
    columns.extend(fields);
    columns.push("violations");
    let mut table = Table::new(columns);
    for (i, r) in rows.iter().enumerate() {
        let mut cells: Vec<Cell> = vec![i.into(), Cell::opt(r.value), cfg.source.label().into()];
        cells.extend(r.report.csv_fields().into_iter().map(|(_, v)| Cell::opt(v)));
        let names: Vec<&str> = r.violations.iter().map(|v| v.invariant).collect();
        cells.push(names.join(";").into());
        table.push(cells);
    }
    table
}

#[derive(Serialize)]
struct RowViolation<'a> {
    row: usize,
    invariant: &'static str,
    detail: &'a str,
}

#[derive(Serialize)]
struct RunJson<'a> {
    #[serde(flatten)]
    table: &'a Table,
    violations: Vec<RowViolation<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificates: Option<Vec<Option<&'a Certificates>>>,
}

fn violation_error(cfg: &SweepConfig, rows: &[Instance]) -> Result<(), CliError> {
    let mut lines = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for v in &r.violations {
            let at = r.value.map_or(String::new(), |x| format!(" ({}={})", cfg.param_name, fmt_sig(x)));
            lines.push(format!("{} in row {i}{at}: {}", v.invariant, v.detail));
        }
    }
    if lines.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(lines.join("\ninvariant violated: ")))
    }
}

fn violations_json(rows: &[Instance]) -> Vec<RowViolation<'_>> {
    rows.iter()
        .enumerate()
        .flat_map(|(row, r)| {
            r.violations.iter().map(move |v| RowViolation { row, invariant: v.invariant, detail: &v.detail })
        })
        .collect()
}

fn run(args: &RunArgs) -> Result<(), CliError> {
    let (cfg, rows) = evaluate(args)?;
    let table = report_table(&cfg, &rows);
    let body = RunJson {
        table: &table,
        violations: violations_json(&rows),
        certificates: args
            .output
            .certificates
            .then(|| rows.iter().map(|r| r.report.certificates.as_ref()).collect()),
    };
    output::emit_report(&table, &body, args.output.format.unwrap_or(Format::Csv), args.output.out.as_deref())?;
    note(args.output.out.is_some(), &format!("{} rows, {} violations", rows.len(), body.violations.len()));
    violation_error(&cfg, &rows)
}

#[derive(Serialize)]
struct InspectJson<'a> {
    report: &'a BoundReport,
    violations: &'a [Violation],
}

fn inspect(args: &RunArgs) -> Result<(), CliError> {
    let (cfg, rows) = evaluate(args)?;
    if rows.len() != 1 {
        return Err(CliError::Config(format!("inspect takes a single parameter value, got {}", rows.len())));
    }
    let table = report_table(&cfg, &rows);
    let body = InspectJson { report: &rows[0].report, violations: &rows[0].violations };
    output::emit_report(&table, &body, args.output.format.unwrap_or(Format::Json), args.output.out.as_deref())?;
    violation_error(&cfg, &rows)
}

fn verify_suite(args: &VerifyArgs) -> Result<(), CliError> {
    let suite: Suite = args.suite.parse().map_err(|e: aqec::Error| CliError::Config(e.to_string()))?;
    let file = file_config(args.config.as_deref())?;
    let cfg = args.search.flags().merged(&file).suite_config(args.seeds)?;
    let report: SuiteReport = verify::run_suite(suite, &cfg).map_err(|e| CliError::Config(e.to_string()))?;
    output::emit_report(&report.table, &report, args.output.format.unwrap_or(Format::Csv), args.output.out.as_deref())?;
    let to_stdout = args.output.out.is_some();
    note(to_stdout, &format!("suite {suite} (seed {}, {} rows)", cfg.seed, report.table.len()));
    for c in &report.checks {
        note(
            to_stdout,
            &format!(
                "  {:<34} {} worst {} (tolerance {}) over {} samples",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.worst.map_or("-".to_string(), fmt_sig),
                fmt_sig(c.tolerance),
                c.samples
            ),
        );
    }
    if let Some(w) = report.check("chain_slack").and_then(|c| c.worst) {
        note(to_stdout, &format!("  min chain slack {}", fmt_sig(-w)));
    }
    let failed: Vec<String> = report
        .failures()
        .map(|c| {
            let at = c.worst_row.map_or(String::new(), |r| format!(" at row {r}"));
            format!("{suite}/{}: worst {}{at} exceeds {}", c.name, c.worst.map_or("-".into(), fmt_sig), fmt_sig(c.tolerance))
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(failed.join("\ninvariant violated: ")))
    }
}

fn frames(args: &FramesArgs) -> Result<(), CliError> {
    let (name, povm) = match &args.povm {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let povm = icpovm::povm_from_json::<f64>(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            (path.display().to_string(), povm)
        }
        None => {
            let kind: FrameKind = args.frame.parse().map_err(|e: aqec::Error| CliError::Config(e.to_string()))?;
            let povm = icpovm::named_frame::<f64>(kind, args.dim).map_err(|e| CliError::Config(e.to_string()))?;
            (kind.to_string(), povm)
        }
    };
    let r = icpovm::frame_report(&name, &povm, args.samples, args.seed).map_err(|e| CliError::Config(e.to_string()))?;
    let mut table = Table::new([
        "frame",
        "d",
        "elements",
        "rank",
        "informationally_complete",
        "max_dual_norm",
        "min_dual_norm",
        "K",
        "dual_hermiticity_defect",
        "reconstruction_residual",
    ]);
    table.push(vec![
        r.frame.clone().into(),
        r.dim.into(),
        r.num_elements.into(),
        r.rank.into(),
        r.informationally_complete.into(),
        r.max_dual_trace_norm.into(),
        r.min_dual_trace_norm.into(),
        r.k_constant.into(),
        r.dual_hermiticity_defect.into(),
        r.reconstruction_residual.into(),
    ]);
    output::emit_report(&table, &r, args.output.format.unwrap_or(Format::Csv), args.output.out.as_deref())?;
    note(
        args.output.out.is_some(),
        &format!(
            "{} d={}: rank {}, K = {}, reconstruction residual {}",
            r.frame,
            r.dim,
            r.rank,
            fmt_sig(r.k_constant),
            fmt_sig(r.reconstruction_residual)
        ),
    );
    if !r.informationally_complete {
        return Err(CliError::Violation(format!("informationally_complete: operator rank {} < {}", r.rank, r.dim * r.dim)));
    }
    if r.reconstruction_residual > aqec::bounds::SLACK_TOL {
        return Err(CliError::Violation(format!("reconstruction: residual {}", fmt_sig(r.reconstruction_residual))));
    }
    if r.dual_hermiticity_defect > icpovm::FRAME_CUTOFF {
        return Err(CliError::Violation(format!("dual_hermitian: defect {}", fmt_sig(r.dual_hermiticity_defect))));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Run(a) => run(a),
        Command::Verify(a) => verify_suite(a),
        Command::Frames(a) => frames(a),
        Command::Inspect(a) => inspect(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
