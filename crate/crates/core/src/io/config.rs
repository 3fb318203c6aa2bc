use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::enumerate::EnumerationCaps;
use crate::eval::{E01Range, E11Form, EvalContext, EvalOptions, RhoDeltaRule};
use crate::graph::json::parse_rational;
use crate::model::{DiscreteData, Marking, WeightSystem};

/// Artifact kinds a run may emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// graphs.json and contributions.json.
    Json,
    /// summary.csv.
    Csv,
    /// graphs.dot.
    Dot,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown format {other:?}; expected json, csv or dot")),
        }
    }
}

/// Partial caps; missing entries take the proven bound for the configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_vertices: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_edges: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_edge_degree_numerator: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_vertex_genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_web_edges: Option<usize>,
}

impl CapsConfig {
    pub fn is_empty(&self) -> bool {
        *self == CapsConfig::default()
    }

    pub fn apply(&self, natural: EnumerationCaps) -> EnumerationCaps {
        EnumerationCaps {
            max_vertices: self.max_vertices.unwrap_or(natural.max_vertices),
            max_edges: self.max_edges.unwrap_or(natural.max_edges),
            max_edge_degree_numerator: self.max_edge_degree_numerator.unwrap_or(natural.max_edge_degree_numerator),
            max_vertex_genus: self.max_vertex_genus.unwrap_or(natural.max_vertex_genus),
            max_web_edges: self.max_web_edges.unwrap_or(natural.max_web_edges),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalSettings {
    pub e01_range: E01Range,
    pub e11_form: E11Form,
    pub rho_delta: RhoDeltaRule,
}

impl EvalSettings {
    fn is_default(&self) -> bool {
        *self == EvalSettings::default()
    }

    pub fn options(&self) -> EvalOptions {
        EvalOptions { e01_range: self.e01_range, e11_form: self.e11_form, rho_delta: self.rho_delta, ..Default::default() }
    }
}

fn default_oracle() -> String {
    "symbolic".to_string()
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Csv]
}

/// The on-disk run description. Rationals are strings so that no value
/// ever passes through a float.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[u32; 5]>,
    pub hours: u32,
    pub genus: u32,
    #[serde(default)]
    pub markings: Vec<String>,
    pub d0: String,
    pub dinf: String,
    #[serde(default = "default_oracle")]
    pub oracle: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    /// Worker count; absent means one per available core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "CapsConfig::is_empty")]
    pub caps: CapsConfig,
    #[serde(default, skip_serializing_if = "EvalSettings::is_default")]
    pub evaluation: EvalSettings,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleSpec {
    Symbolic,
    Zero,
    Tabulated(PathBuf),
}

impl OracleSpec {
    /// Parses `symbolic`, `zero` or `tabulated:<path>`; relative table paths
    /// are taken from `base`.
    pub fn parse(s: &str, base: &Path) -> Result<Self, IoError> {
        match s.trim() {
            "symbolic" => Ok(OracleSpec::Symbolic),
            "zero" => Ok(OracleSpec::Zero),
            other => match other.strip_prefix("tabulated:") {
                Some(p) if !p.trim().is_empty() => Ok(OracleSpec::Tabulated(base.join(p.trim()))),
                _ => Err(IoError::ConfigInvalid(format!(
                    "unknown oracle {other:?}; expected symbolic, zero or tabulated:<path>"
                ))),
            },
        }
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSpec::Symbolic => f.write_str("symbolic"),
            OracleSpec::Zero => f.write_str("zero"),
            OracleSpec::Tabulated(p) => write!(f, "tabulated:{}", p.display()),
        }
    }
}

/// A checked configuration.
#[derive(Clone, Debug)]
pub struct ResolvedConfig {
    pub ws: WeightSystem,
    pub dd: DiscreteData,
    pub caps: EnumerationCaps,
    pub oracle: OracleSpec,
    pub formats: Vec<Format>,
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub evaluation: EvalSettings,
}

impl ResolvedConfig {
    pub fn eval_context(&self) -> EvalContext {
        EvalContext::new(self.ws.clone(), self.dd.hours).with_options(self.evaluation.options())
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

fn invalid(e: impl ToString) -> IoError {
    IoError::ConfigInvalid(e.to_string())
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<Self, IoError> {
        toml::from_str(s).map_err(|e| invalid(e.message()))
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path).map_err(|e| IoError::fs(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    /// Checks every field; relative paths are taken from `base`.
    pub fn resolve(&self, base: &Path) -> Result<ResolvedConfig, IoError> {
        let ws = match (&self.preset, &self.weights) {
            (Some(p), None) => WeightSystem::preset(p).map_err(invalid)?,
            (None, Some(a)) => WeightSystem::new(*a).map_err(invalid)?,
            (Some(_), Some(_)) => return Err(invalid("give either preset or weights, not both")),
            (None, None) => return Err(invalid("one of preset or weights is required")),
        };
        let markings = self
            .markings
            .iter()
            .map(|m| m.parse::<Marking>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        let d0 = parse_rational(&self.d0).map_err(|_| invalid(format!("d0 {:?} is not a rational p/q", self.d0)))?;
        let dinf =
            parse_rational(&self.dinf).map_err(|_| invalid(format!("dinf {:?} is not a rational p/q", self.dinf)))?;
        let dd = DiscreteData::new(&ws, self.genus, markings, d0, dinf, self.hours).map_err(invalid)?;
        dd.validate(&ws).map_err(invalid)?;
        let caps = self.caps.apply(EnumerationCaps::natural(&ws, &dd));
        let oracle = OracleSpec::parse(&self.oracle, base)?;
        if self.formats.is_empty() {
            return Err(invalid("formats must not be empty"));
        }
        let mut formats = self.formats.clone();
        formats.sort();
        formats.dedup();
        let threads = match self.threads {
            Some(0) => return Err(invalid("threads must be positive")),
            Some(n) => n,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        Ok(ResolvedConfig {
            ws,
            dd,
            caps,
            oracle,
            formats,
            threads,
            cache_dir: self.cache_dir.as_ref().map(|p| base.join(p)),
            output: self.output.as_ref().map(|p| base.join(p)),
            evaluation: self.evaluation,
        })
    }
}
