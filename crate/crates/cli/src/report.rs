use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use hypertile_core::io::ParseError;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Failure classes, each with a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Params(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Params(_) => 2,
            CliError::Io(_) => 3,
            CliError::Cap(_) => 4,
        })
    }
}

impl From<hypertile_core::Error> for CliError {
    fn from(e: hypertile_core::Error) -> Self {
        match e {
            hypertile_core::Error::CapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Params(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Io { .. } => CliError::Io(e.to_string()),
            ParseError::Invalid(inner) => inner.into(),
            _ => CliError::Params(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Everything needed to reproduce a run.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub wall_time_ms: u128,
    pub input_digests: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub result: Value,
}

impl RunReport {
    pub fn new(subcommand: &str, params: Value, seed: Option<u64>) -> Self {
        RunReport {
            subcommand: subcommand.to_string(),
            params,
            seed,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: 0,
            input_digests: BTreeMap::new(),
            outputs: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn digest_input(&mut self, path: &Path) -> CliResult<()> {
        let bytes = std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.input_digests.insert(path.display().to_string(), format!("{:x}", Sha256::digest(&bytes)));
        Ok(())
    }

    pub fn write_output(&mut self, path: &Path, contents: &str) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }
}

/// A finished command: its report and whether the answer was negative.
pub struct Outcome {
    pub report: RunReport,
    pub negative: bool,
}

impl Outcome {
    pub fn positive(report: RunReport) -> Self {
        Outcome { report, negative: false }
    }
}
