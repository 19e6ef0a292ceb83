use std::path::PathBuf;

use spectra_core::faces::FacesError;
use spectra_core::multiscale::MultiscaleError;
use spectra_core::proxdecay::ProxError;
use spectra_core::rootsys::RootSysError;
use spectra_core::stabcert::StabError;
use spectra_core::su2harm::HarmError;
use spectra_core::walkdio::WalkError;
use spectra_core::wedge::WedgeError;
use spectra_core::Diagnostic;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    /// Unreadable file, JSON syntax error (with line and column), or a
    /// schema violation (with the JSON pointer of the offending field).
    #[error("{}: {detail}", path.display())]
    InvalidMeasureFile { path: PathBuf, detail: String, source_code: Option<(&'static str, &'static str)> },
    /// Ensemble, generator or config file that does not match its schema.
    #[error("{}: {detail}", path.display())]
    InvalidInput { path: PathBuf, detail: String },
    #[error("cannot write {}: {detail}", path.display())]
    Output { path: PathBuf, detail: String },
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    Faces(#[from] FacesError),
    #[error(transparent)]
    Wedge(#[from] WedgeError),
    #[error(transparent)]
    Harm(#[from] HarmError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Multiscale(#[from] MultiscaleError),
    #[error(transparent)]
    Prox(#[from] ProxError),
    #[error(transparent)]
    Stab(#[from] StabError),
}

impl CliError {
    /// 1 for usage and input errors, 2 for errors raised by a module.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownCommand(_)
            | CliError::InvalidMeasureFile { .. }
            | CliError::InvalidInput { .. }
            | CliError::Output { .. } => 1,
            _ => 2,
        }
    }

    fn inner(&self) -> Option<&dyn Diagnostic> {
        Some(match self {
            CliError::RootSys(e) => e,
            CliError::Faces(e) => e,
            CliError::Wedge(e) => e,
            CliError::Harm(e) => e,
            CliError::Walk(e) => e,
            CliError::Multiscale(e) => e,
            CliError::Prox(e) => e,
            CliError::Stab(e) => e,
            _ => return None,
        })
    }

    /// `error[module::Code] message`, plus the underlying module code for
    /// measure files rejected by the parser.
    pub fn render(&self) -> String {
        let mut s = format!("error[{}::{}] {}", self.module(), self.code(), self);
        if let CliError::InvalidMeasureFile { source_code: Some((m, c)), .. } = self {
            s.push_str(&format!(" ({m}::{c})"));
        }
        s
    }
}

impl Diagnostic for CliError {
    fn module(&self) -> &'static str {
        self.inner().map_or("cli", |d| d.module())
    }

    fn code(&self) -> &'static str {
        match self {
            CliError::UnknownCommand(_) => "UnknownCommand",
            CliError::InvalidMeasureFile { .. } => "InvalidMeasureFile",
            CliError::InvalidInput { .. } => "InvalidInput",
            CliError::Output { .. } => "OutputError",
            other => other.inner().map_or("Unknown", |d| d.code()),
        }
    }
}
