//! The `tsk` command-line front end.
//!
//! Exit codes: 0 on success, 2 for parse, domain and capacity errors, 3 when
//! the enumeration budget ran out (the lower-bound report is still printed),
//! 1 for I/O failures.

mod cache;
mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

pub use cache::{cache_path, visit_systems, SystemRecord, Visit};
pub use commands::family_name;
pub use config::{FileConfig, GlobalArgs, OutputFormat, RunConfig};
pub use report::{
    AuditResult, Bound, BudgetStatus, CertArrow, Certificate, Check, Completion, ComplexityResult, CrossCheck,
    EnumerateResult, GroupMeta, InfoResult, Observation, Report, Results, WidthResult,
};

use crate::error::Error;
use crate::groups::GroupSpec;
use crate::transfer::with_workers;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tsk", version, about = "Transfer systems, widths and complexities of finite groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Enumerate every transfer system.
    Exact,
    /// Certified lower bound from a partial rainbow.
    Rainbow,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Order, generators and lattice sizes.
    Info { spec: String },
    /// Width and the meet-irreducible classes.
    Width { spec: String },
    /// Complexity, exactly or as a rainbow lower bound.
    Complexity {
        spec: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Count transfer systems, optionally dumping them as JSON lines.
    Enumerate {
        spec: String,
        /// Write one JSON record per system to this file.
        #[arg(long)]
        jsonl: Option<PathBuf>,
        /// Re-check every system against the axioms.
        #[arg(long)]
        validate: bool,
    },
    /// Structural audits for the group's family.
    Audit { spec: String },
    /// Class-level Hasse diagram in DOT.
    ExportDot {
        spec: String,
        /// Draw a partial rainbow (dihedral and semidihedral groups).
        #[arg(long)]
        rainbow: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn spec(&self) -> &str {
        match self {
            Command::Info { spec }
            | Command::Width { spec }
            | Command::Complexity { spec, .. }
            | Command::Enumerate { spec, .. }
            | Command::Audit { spec }
            | Command::ExportDot { spec, .. } => spec,
        }
    }
}

enum Output {
    Report(Report),
    Dot(String, Option<PathBuf>),
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::BudgetExhausted { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn execute(command: &Command, config: &RunConfig, notes: &mut Vec<String>) -> crate::Result<Output> {
    let spec = GroupSpec::parse(command.spec())?;
    let started = Instant::now();
    if config.format == OutputFormat::Dot && !matches!(command, Command::ExportDot { .. }) {
        return Err(Error::Domain("dot output is only produced by export-dot".into()));
    }
    let report = match command {
        Command::Info { .. } => commands::info(&spec, config)?,
        Command::Width { .. } => commands::width(&spec, config)?,
        Command::Complexity { mode: Mode::Exact, .. } => commands::complexity_exact(&spec, config, notes)?,
        Command::Complexity { mode: Mode::Rainbow, .. } => commands::complexity_rainbow(&spec, config)?,
        Command::Enumerate { jsonl, validate, .. } => {
            commands::enumerate(&spec, config, jsonl.as_deref(), *validate, notes)?
        }
        Command::Audit { .. } => commands::audit(&spec, config)?,
        Command::ExportDot { rainbow, output, .. } => {
            return Ok(Output::Dot(commands::export_dot(&spec, config, *rainbow)?, output.clone()));
        }
    };
    Ok(Output::Report(commands::finish(report, started)))
}

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `stdout` and diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let config = match cli.global.resolve() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "tsk: {e}");
            return exit_code(&e);
        }
    };
    let mut notes = Vec::new();
    let result = with_workers(config.workers, || execute(&cli.command, &config, &mut notes)).and_then(|r| r);
    for n in &notes {
        let _ = writeln!(stderr, "tsk: {n}");
    }
    let output = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "tsk: {e}");
            return exit_code(&e);
        }
    };
    match output {
        Output::Dot(dot, Some(path)) => {
            if let Err(e) = std::fs::write(&path, dot) {
                let _ = writeln!(stderr, "tsk: cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
            EXIT_OK
        }
        Output::Dot(dot, None) => {
            let _ = write!(stdout, "{dot}");
            EXIT_OK
        }
        Output::Report(report) => {
            let text = match config.format {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Csv => match report.to_csv() {
                    Ok(t) => t,
                    Err(e) => {
                        let _ = writeln!(stderr, "tsk: {e}");
                        return exit_code(&e);
                    }
                },
                _ => report.to_text(),
            };
            let _ = write!(stdout, "{text}");
            if report.budget.status == Completion::LowerBoundOnly {
                let _ = writeln!(
                    stderr,
                    "tsk: budget of {} systems exhausted; results are lower bounds only",
                    report.budget.budget
                );
                EXIT_BUDGET
            } else {
                EXIT_OK
            }
        }
    }
}
