//! Command-line front end for `reccost-core`.
//!
//! [`run`] parses an argument vector, executes one subcommand, prints a text
//! summary and returns the exit code together with a [`RunReport`].

mod args;
mod commands;
mod format;
mod samples;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

pub use format::num as format_number;
pub use samples::{load_samples, SampleError};

/// Environment variable overriding the quadrature evaluation budget.
pub const EVAL_BUDGET_ENV: &str = "RECCOST_EVAL_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    VerificationFailed,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::InputError => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::VerificationFailed => "verification-failed",
            Status::InputError => "input-error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// Parsed parameters keyed by long flag name.
    pub inputs: Value,
    /// Operation-specific payload; `null` on input errors.
    pub results: Value,
    /// Warnings and grid specifications.
    pub diagnostics: Value,
    pub status: Status,
}

impl RunReport {
    /// Argument vector that reproduces this run from its echoed inputs.
    pub fn replay_argv(&self) -> Vec<String> {
        let mut argv = vec![self.command.clone()];
        if let Value::Object(map) = &self.inputs {
            for (key, value) in map {
                argv.push(format!("--{key}"));
                argv.push(match value {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                });
            }
        }
        argv
    }

    fn input_error(command: &str, inputs: Value, message: &str) -> Self {
        RunReport {
            command: command.to_owned(),
            inputs,
            results: Value::Null,
            diagnostics: json!({ "warnings": [], "error": message }),
            status: Status::InputError,
        }
    }
}

/// Runs one invocation, printing to standard output and standard error.
/// `argv` excludes the program name.
pub fn run<I, T>(argv: I) -> (i32, RunReport)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run`], with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> (i32, RunReport)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let first = argv
        .first()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let cli = match args::Cli::try_parse_from(std::iter::once(OsString::from("reccost")).chain(argv)) {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let rendered = e.render().to_string();
            if ok {
                let _ = write!(out, "{rendered}");
                let report = RunReport {
                    command: first,
                    inputs: json!({}),
                    results: Value::Null,
                    diagnostics: json!({ "warnings": [] }),
                    status: Status::Ok,
                };
                return (0, report);
            }
            let _ = write!(err, "{rendered}");
            let report = RunReport::input_error(&first, json!({}), rendered.trim_end());
            return (2, report);
        }
    };

    let name = cli.command.name();
    let report = match commands::execute(&cli.command) {
        Ok(outcome) => {
            let mut text = String::new();
            format::flatten("", &outcome.results, &mut text);
            let _ = write!(out, "{text}");
            for w in &outcome.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let mut diagnostics = outcome.diagnostics;
            diagnostics.insert("warnings".into(), json!(outcome.warnings));
            let report = RunReport {
                command: name.to_owned(),
                inputs: outcome.inputs,
                results: outcome.results,
                diagnostics: Value::Object(diagnostics),
                status: outcome.status,
            };
            if let (Some(path), Some(rows)) = (outcome.plot_path, outcome.plot) {
                if let Err(e) = write_plot_csv(&path, &rows) {
                    let msg = format!("cannot write {}: {e}", path.display());
                    let _ = writeln!(err, "error: {msg}");
                    RunReport::input_error(name, report.inputs, &msg)
                } else {
                    report
                }
            } else {
                report
            }
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            RunReport::input_error(name, failure.inputs, &failure.message)
        }
    };
    let _ = writeln!(out, "status = {}", report.status.as_str());

    if let Some(path) = &cli.json {
        if let Err(e) = write_json(path, &report) {
            let msg = format!("cannot write {}: {e}", path.display());
            let _ = writeln!(err, "error: {msg}");
            return (2, RunReport::input_error(name, report.inputs, &msg));
        }
    }
    (report.status.exit_code(), report)
}

fn write_json(path: &Path, report: &RunReport) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report)?;
    writeln!(w)?;
    w.flush()
}

/// One row of `--plot-csv` output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotRow {
    pub t: f64,
    pub h: f64,
    pub branch: f64,
    pub envelope: f64,
    pub error: f64,
}

fn write_plot_csv(path: &Path, rows: &[PlotRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["t", "H", "branch", "envelope", "error"])?;
    for r in rows {
        w.write_record([r.t, r.h, r.branch, r.envelope, r.error].map(format::num))?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) type Object = Map<String, Value>;
