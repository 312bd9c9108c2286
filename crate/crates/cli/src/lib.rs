//! Command-line front end for `qgraph-core`: argument handling, reports and
//! their text, JSON and CSV renderings.

pub mod args;
pub mod commands;
pub mod format;
pub mod report;

use std::fmt;
use std::path::Path;

use qgraph_core::ErrorKind;

use args::{Cli, Command, Config, Format};
use report::Report;

/// A failure with the exit status it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Input, message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Numerical, message: message.into() }
    }

    /// 2 for input errors, 3 for domain errors, 4 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => 2,
            ErrorKind::Domain => 3,
            ErrorKind::Numerical => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<qgraph_core::Error> for CliError {
    fn from(e: qgraph_core::Error) -> Self {
        Self { kind: e.kind(), message: e.to_string() }
    }
}

/// Merges the config file, if any, into the flags.
pub fn resolve_config(mut cli: Cli) -> Result<Cli, CliError> {
    if let Some(path) = cli.config.clone() {
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Config::load(&path)?.apply(&mut cli, &base);
    }
    Ok(cli)
}

/// Runs the selected command.
pub fn build_report(cli: &Cli) -> Result<Report, CliError> {
    let format = cli.format.unwrap_or(Format::Text);
    Ok(match &cli.command {
        Command::Cf(a) => Report::Cf(commands::cf(a)?),
        Command::Gaps(a) => Report::Gaps(commands::gaps(a)?),
        Command::Classify(a) => Report::Classify(commands::classify(a)?),
        Command::Thresholds(a) => Report::Thresholds(commands::thresholds(a)?),
        Command::Secular(a) => Report::Secular(commands::secular(a, format != Format::Text)?),
    })
}

/// The report rendered in the requested format.
pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(report.text()),
        Format::Json => report.json(),
        Format::Csv => report.csv(),
    }
}

/// Full run: config, command, rendering and output.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let cli = resolve_config(cli)?;
    let report = build_report(&cli)?;
    let text = render(&report, cli.format.unwrap_or(Format::Text))?;
    match &cli.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::input(format!("cannot write output: {e}")))
        }
    }
}
