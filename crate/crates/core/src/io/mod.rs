//! Run configuration, artifacts, the enumeration cache and inspection.

mod artifacts;
mod cache;
mod config;
mod inspect;
mod pipeline;

use std::fs;
use std::path::Path;

pub use artifacts::{
    ContributionEntry, ContributionsArtifact, FactorRecord, GraphRecord, GraphsArtifact, GroupRecord, SummaryRow,
    CONTRIBUTIONS_FORMAT, GRAPHS_FORMAT,
};
pub use cache::{cache_gc, cache_key, EnumerationCache, GcReport, CACHE_ENV};
pub use config::{CapsConfig, EvalSettings, Format, OracleSpec, ResolvedConfig, RunConfig};
pub use inspect::{inspect, load_graphs, InspectFilter, InspectRow};
pub use pipeline::{run_enumerate, run_evaluate, RunOptions, RunSummary};

use crate::enumerate::{EnumError, Truncation};
use crate::eval::EvalError;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("search truncated: {}", .0.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("; "))]
    CapExceeded(Vec<Truncation>),
    #[error("oracle miss: {0}")]
    OracleMiss(String),
    #[error("malformed file {path}: {reason}")]
    FileMalformed { path: String, reason: String },
    #[error("{path}: {source}")]
    Fs { path: String, source: std::io::Error },
    #[error(transparent)]
    Eval(EvalError),
    #[error("{0}")]
    Other(String),
}

impl IoError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            IoError::ConfigInvalid(_) => 2,
            IoError::CapExceeded(_) => 3,
            IoError::OracleMiss(_) => 4,
            IoError::FileMalformed { .. } => 5,
            IoError::Fs { .. } => 6,
            IoError::Eval(_) | IoError::Other(_) => 1,
        }
    }

    pub(crate) fn fs(path: &Path, source: std::io::Error) -> Self {
        IoError::Fs { path: path.display().to_string(), source }
    }

    pub(crate) fn malformed(path: &Path, reason: impl ToString) -> Self {
        IoError::FileMalformed { path: path.display().to_string(), reason: reason.to_string() }
    }
}

impl From<EnumError> for IoError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::CapExceeded(t) => IoError::CapExceeded(t),
            EnumError::Model(m) => IoError::ConfigInvalid(m.to_string()),
            other => IoError::Other(other.to_string()),
        }
    }
}

impl From<EvalError> for IoError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::MissingCorrelator(q) => IoError::OracleMiss(q),
            other => IoError::Eval(other),
        }
    }
}

/// Write `bytes` to `path` through a sibling temporary file and a rename, so
/// readers see either the old file or the complete new one.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| IoError::fs(dir, e))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| IoError::fs(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        IoError::fs(path, e)
    })
}
