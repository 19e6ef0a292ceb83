//! Front end for `spectra-core`: typed experiment configs, measure and
//! matrix file ingestion, and reproducible JSON/CSV reports.

mod commands;
pub mod config;
mod error;
pub mod input;
pub mod report;

use std::path::Path;

pub use commands::run;
pub use config::{Command, ExperimentConfig, Format};
pub use error::CliError;
pub use input::{load_ensemble, load_generators, load_measure};
pub use report::{Report, Results};

/// Reads a `run --config` file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let invalid = |detail: String| CliError::InvalidInput { path: path.to_path_buf(), detail };
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read file: {e}")))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| invalid(format!("line {} column {}: {e}", e.line(), e.column())))?;
    match v.get("command").and_then(|c| c.as_str()) {
        Some(c) if Command::NAMES.contains(&c) => {}
        Some(c) => return Err(CliError::UnknownCommand(c.to_string())),
        None => return Err(invalid("/command: expected a command name".into())),
    }
    serde_json::from_value(v).map_err(|e| invalid(e.to_string()))
}

/// Renders the report in the configured format and writes it to the
/// configured path, or returns it for stdout.
pub fn emit(report: &Report) -> Result<Option<String>, CliError> {
    let text = match report.config.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    match &report.config.output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Output { path: path.clone(), detail: e.to_string() })?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
