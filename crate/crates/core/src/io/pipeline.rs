use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::artifacts::{summary_csv, ConfigRecord, ContributionsArtifact, GraphsArtifact};
use super::cache::{cache_key, EnumerationCache};
use super::config::{Format, OracleSpec, ResolvedConfig};
use super::{write_atomic, IoError};
use crate::enumerate::enumerate_flat_regular;
use crate::eval::{sum_graphs, CorrelatorOracle, CorrelatorTable};
use crate::graph::DecoratedGraph;

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Directory receiving the artifacts.
    pub out: PathBuf,
    pub cache: Option<EnumerationCache>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub key: String,
    pub cache_hit: bool,
    pub graphs: usize,
    pub pure_loops: usize,
    /// The summed contribution when it is fully explicit.
    pub total: Option<String>,
    pub written: Vec<PathBuf>,
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, IoError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().map_err(|e| IoError::Other(e.to_string()))
}

/// Enumeration through the cache. Runs inside the caller's pool.
fn enumerate_cached(cfg: &ResolvedConfig, cache: Option<&EnumerationCache>) -> Result<(GraphsArtifact, RunSummary), IoError> {
    let key = cache_key(&ConfigRecord::new(cfg), &cfg.caps);
    if let Some(hit) = cache.and_then(|c| c.get(&key)) {
        log::info!("cache hit {key}");
        let summary =
            RunSummary { key, cache_hit: true, graphs: hit.graphs.len(), pure_loops: hit.pure_loops.len(), ..Default::default() };
        return Ok((hit, summary));
    }
    let result = enumerate_flat_regular(&cfg.ws, &cfg.dd, &cfg.caps)?.strict()?;
    log::info!("enumerated {} graphs over {} shards", result.graphs.len(), result.shards);
    let artifact = GraphsArtifact::new(cfg, &result.graphs, &result.pure_loops);
    if let Some(c) = cache {
        c.put(&key, &artifact)?;
        log::info!("cached {key}");
    }
    let summary = RunSummary {
        key,
        cache_hit: false,
        graphs: result.graphs.len(),
        pure_loops: result.pure_loops.len(),
        ..Default::default()
    };
    Ok((artifact, summary))
}

fn graph_files(cfg: &ResolvedConfig, artifact: &GraphsArtifact, out: &Path) -> Result<Vec<(PathBuf, Vec<u8>)>, IoError> {
    let mut files = Vec::new();
    if cfg.wants(Format::Json) {
        files.push((out.join("graphs.json"), artifact.to_json().into_bytes()));
    }
    if cfg.wants(Format::Dot) {
        let dot = artifact.to_dot().map_err(IoError::Other)?;
        files.push((out.join("graphs.dot"), dot.into_bytes()));
    }
    Ok(files)
}

fn write_all(files: Vec<(PathBuf, Vec<u8>)>, summary: &mut RunSummary) -> Result<(), IoError> {
    for (path, bytes) in files {
        write_atomic(&path, &bytes)?;
        summary.written.push(path);
    }
    Ok(())
}

/// Enumerate and write graphs.json (and graphs.dot when requested).
pub fn run_enumerate(cfg: &ResolvedConfig, opts: &RunOptions) -> Result<RunSummary, IoError> {
    let (artifact, mut summary) = pool(cfg.threads)?.install(|| enumerate_cached(cfg, opts.cache.as_ref()))?;
    write_all(graph_files(cfg, &artifact, &opts.out)?, &mut summary)?;
    Ok(summary)
}

fn load_oracle(spec: &OracleSpec) -> Result<CorrelatorOracle, IoError> {
    Ok(match spec {
        OracleSpec::Symbolic => CorrelatorOracle::Symbolic,
        OracleSpec::Zero => CorrelatorOracle::Zero,
        OracleSpec::Tabulated(path) => {
            let file = std::fs::File::open(path).map_err(|e| IoError::fs(path, e))?;
            let table = CorrelatorTable::read_csv(file).map_err(|e| IoError::malformed(path, e))?;
            log::info!("loaded {} correlator rows from {}", table.len(), path.display());
            CorrelatorOracle::Tabulated(Arc::new(table))
        }
    })
}

/// Enumerate, evaluate every graph and write all requested artifacts.
/// Nothing is written unless the whole run succeeds.
pub fn run_evaluate(cfg: &ResolvedConfig, opts: &RunOptions) -> Result<RunSummary, IoError> {
    let oracle = load_oracle(&cfg.oracle)?;
    let ctx = cfg.eval_context();
    let (artifact, mut summary, report) = pool(cfg.threads)?.install(|| {
        let (artifact, summary) = enumerate_cached(cfg, opts.cache.as_ref())?;
        let (graphs, _): (Vec<DecoratedGraph>, _) =
            artifact.decode().map_err(|e| IoError::Other(format!("enumeration result: {e}")))?;
        let report = sum_graphs(&ctx, &graphs, &cfg.dd, &oracle)?;
        Ok::<_, IoError>((artifact, summary, report))
    })?;
    let mut files = graph_files(cfg, &artifact, &opts.out)?;
    if cfg.wants(Format::Json) {
        let contributions = ContributionsArtifact::new(cfg, &cfg.oracle.to_string(), &report);
        files.push((opts.out.join("contributions.json"), contributions.to_json().into_bytes()));
    }
    if cfg.wants(Format::Csv) {
        files.push((opts.out.join("summary.csv"), summary_csv(&report)?));
    }
    summary.total = report.total.as_ref().map(|t| t.to_string());
    write_all(files, &mut summary)?;
    Ok(summary)
}
