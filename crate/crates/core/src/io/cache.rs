use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime};

use sha2::{Digest, Sha256};

use super::artifacts::{ConfigRecord, GraphsArtifact, GRAPHS_FORMAT};
use super::{write_atomic, IoError};
use crate::enumerate::EnumerationCaps;

/// Environment variable naming the default cache root.
pub const CACHE_ENV: &str = "MSPLOC_CACHE";

/// Content address of an enumeration: its inputs and the library version.
pub fn cache_key(config: &ConfigRecord, caps: &EnumerationCaps) -> String {
    let input = serde_json::json!({
        "format": GRAPHS_FORMAT,
        "version": env!("CARGO_PKG_VERSION"),
        "configuration": config,
        "caps": caps,
    });
    hex::encode(Sha256::digest(input.to_string().as_bytes()))
}

/// Enumeration results stored as graphs artifacts under `<root>/enum/<key>.json`.
#[derive(Clone, Debug)]
pub struct EnumerationCache {
    root: PathBuf,
}

impl EnumerationCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        EnumerationCache { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn dir(&self) -> PathBuf {
        self.root.join("enum")
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir().join(format!("{key}.json"))
    }

    /// A stored entry whose graphs decode and whose inputs hash to `key`;
    /// anything else counts as a miss.
    pub fn get(&self, key: &str) -> Option<GraphsArtifact> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        match check_entry(&text, key) {
            Ok(a) => Some(a),
            Err(reason) => {
                log::warn!("ignoring cache entry {}: {reason}", path.display());
                None
            }
        }
    }

    pub fn put(&self, key: &str, artifact: &GraphsArtifact) -> Result<(), IoError> {
        write_atomic(&self.path(key), artifact.to_json().as_bytes())
    }
}

fn check_entry(text: &str, key: &str) -> Result<GraphsArtifact, String> {
    let a = GraphsArtifact::from_json(text)?;
    if cache_key(&a.configuration, &a.caps) != key {
        return Err("contents do not match the key".to_string());
    }
    a.decode()?;
    Ok(a)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GcReport {
    pub kept: usize,
    pub removed: Vec<PathBuf>,
}

/// Delete leftover temporaries, unreadable or stale-version entries, and,
/// with `max_age`, entries not modified within that span.
pub fn cache_gc(root: &Path, max_age: Option<Duration>) -> Result<GcReport, IoError> {
    let dir = root.join("enum");
    let mut report = GcReport::default();
    let entries = match fs::read_dir(&dir) {
        Ok(rd) => rd,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(report),
        Err(e) => return Err(IoError::fs(&dir, e)),
    };
    let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    let now = SystemTime::now();
    for path in paths {
        if !path.is_file() {
            continue;
        }
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let stale = match name.strip_suffix(".json") {
            Some(key) if !name.starts_with('.') => {
                let old = max_age.is_some_and(|age| {
                    fs::metadata(&path)
                        .and_then(|m| m.modified())
                        .ok()
                        .and_then(|t| now.duration_since(t).ok())
                        .is_some_and(|d| d > age)
                });
                old || fs::read_to_string(&path).map_err(|e| e.to_string()).and_then(|t| check_entry(&t, key)).is_err()
            }
            _ => true,
        };
        if stale {
            fs::remove_file(&path).map_err(|e| IoError::fs(&path, e))?;
            log::info!("removed {}", path.display());
            report.removed.push(path);
        } else {
            report.kept += 1;
        }
    }
    Ok(report)
}
