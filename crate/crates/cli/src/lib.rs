//! Front end for the periodicity engine: argument parsing, group and table
//! resolution, and report rendering.

pub mod args;
mod commands;
mod context;

use std::path::Path;

use eqper_core::lattice::LatticeError;
use eqper_core::periodic::PeriodicError;
use eqper_core::repring::{ExprError, ReprError};
use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

pub use args::{Cli, Command, Format};
pub use commands::Report;
pub use context::CACHE_ENV;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{0}")]
    User(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn user(msg: impl Into<String>) -> CliError {
        CliError::User(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> CliError {
        CliError::Invariant(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::User(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::user(e.to_string())
    }
}

impl From<ReprError> for CliError {
    fn from(e: ReprError) -> Self {
        match e {
            ReprError::Inconsistent(_) | ReprError::NonIntegralFixedDim(_) => CliError::invariant(e.to_string()),
            _ => CliError::user(e.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::invariant(e.to_string())
    }
}

impl From<PeriodicError> for CliError {
    fn from(e: PeriodicError) -> Self {
        match e {
            PeriodicError::Repr(r) => r.into(),
            PeriodicError::Lattice(l) => l.into(),
            e if e.is_invariant_violation() => CliError::invariant(e.to_string()),
            e => CliError::user(e.to_string()),
        }
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.text.clone(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

/// Runs a single parsed invocation and returns the complete report.
pub fn run_report(cli: &Cli) -> Result<Report, CliError> {
    let cmd = cli
        .command
        .as_ref()
        .ok_or_else(|| CliError::user("no command given (see --help)"))?;
    if let Command::Gamma { m } = cmd {
        return Ok(commands::gamma_report(*m));
    }
    let spec = cli
        .group
        .as_deref()
        .ok_or_else(|| CliError::user("--group is required"))?;
    let group = context::resolve_group(spec)?;
    let table = context::resolve_table(&group, cli.table.as_deref(), cli.names.as_deref())?;
    commands::execute(cmd, &table)
}

/// Runs an invocation, including `--batch`, and renders it. Errors leave
/// no partial output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.batch {
        Some(_) if cli.command.is_some() => Err(CliError::user("--batch cannot be combined with a command")),
        Some(path) => run_batch(path, cli.format),
        None => Ok(render(&run_report(cli)?, cli.format)),
    }
}

fn run_batch(path: &Path, format: Format) -> Result<String, CliError> {
    use clap::Parser;
    let text = context::read(path)?;
    let entries: Vec<Vec<String>> =
        serde_json::from_str(&text).map_err(|e| CliError::user(format!("batch file: {e}")))?;
    let parsed: Vec<Cli> = entries
        .iter()
        .enumerate()
        .map(|(i, argv)| {
            let cli = Cli::try_parse_from(std::iter::once("eqper".to_string()).chain(argv.iter().cloned()))
                .map_err(|e| CliError::user(format!("batch entry {i}: {e}")))?;
            if cli.batch.is_some() {
                return Err(CliError::user(format!("batch entry {i}: nested --batch")));
            }
            Ok(cli)
        })
        .collect::<Result<_, _>>()?;
    let results: Vec<Result<Report, CliError>> = parsed.par_iter().map(run_report).collect();
    let mut reports = Vec::with_capacity(results.len());
    for (i, r) in results.into_iter().enumerate() {
        reports.push(r.map_err(|e| match e {
            CliError::User(m) => CliError::User(format!("batch entry {i}: {m}")),
            CliError::Invariant(m) => CliError::Invariant(format!("batch entry {i}: {m}")),
        })?);
    }
    Ok(match format {
        Format::Json => {
            let all = Value::Array(reports.into_iter().map(|r| r.json).collect());
            let mut s = serde_json::to_string_pretty(&all).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => reports
            .iter()
            .map(|r| r.text.clone())
            .collect::<Vec<_>>()
            .join("---\n"),
    })
}
