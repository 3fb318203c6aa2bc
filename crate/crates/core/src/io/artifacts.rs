use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{EvalSettings, ResolvedConfig};
use super::IoError;
use crate::enumerate::EnumerationCaps;
use crate::eval::{LedgerEntry, SumReport};
use crate::graph::dot::to_dot;
use crate::graph::json::GraphJson;
use crate::graph::{automorphism_order, canonical_form, DecoratedGraph, Level};

pub const GRAPHS_FORMAT: &str = "msploc-graphs/1";
pub const CONTRIBUTIONS_FORMAT: &str = "msploc-contributions/1";

/// The discrete data of a run, as written into every artifact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigRecord {
    pub weights: [u32; 5],
    pub hours: u32,
    pub genus: u32,
    pub markings: Vec<String>,
    pub d0: String,
    pub dinf: String,
}

impl ConfigRecord {
    pub fn new(cfg: &ResolvedConfig) -> Self {
        ConfigRecord {
            weights: cfg.ws.a(),
            hours: cfg.dd.hours,
            genus: cfg.dd.genus,
            markings: cfg.dd.markings.iter().map(|m| m.to_string()).collect(),
            d0: cfg.dd.d0.to_string(),
            dinf: cfg.dd.dinf.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub index: usize,
    pub canonical: String,
    pub automorphisms: u64,
    /// Vertex counts at levels 0, 1 and infinity.
    pub levels: [usize; 3],
    pub edge_types: BTreeMap<String, usize>,
    pub graph: GraphJson,
}

pub(crate) fn level_profile(g: &DecoratedGraph) -> [usize; 3] {
    let count = |l: Level| g.vertices.iter().filter(|v| v.level == l).count();
    [count(Level::Zero), count(Level::One), count(Level::Inf)]
}

impl GraphRecord {
    pub fn new(index: usize, g: &DecoratedGraph) -> Self {
        let mut edge_types = BTreeMap::new();
        for e in &g.edges {
            *edge_types.entry(e.kind.name().to_string()).or_insert(0) += 1;
        }
        GraphRecord {
            index,
            canonical: canonical_form(g).to_string(),
            automorphisms: automorphism_order(g),
            levels: level_profile(g),
            edge_types,
            graph: GraphJson::from(g),
        }
    }

    /// The stored graph, checked against its recorded canonical form.
    pub fn decode(&self) -> Result<DecoratedGraph, String> {
        let g = DecoratedGraph::try_from(&self.graph).map_err(|e| format!("graph {}: {e}", self.index))?;
        if canonical_form(&g).to_string() != self.canonical {
            return Err(format!("graph {}: canonical form does not match the stored graph", self.index));
        }
        Ok(g)
    }
}

/// Contents of graphs.json.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphsArtifact {
    pub format: String,
    pub configuration: ConfigRecord,
    pub caps: EnumerationCaps,
    pub graphs: Vec<GraphRecord>,
    /// Pure loops are listed but never evaluated.
    pub pure_loops: Vec<GraphRecord>,
}

impl GraphsArtifact {
    pub fn new(cfg: &ResolvedConfig, graphs: &[DecoratedGraph], pure_loops: &[DecoratedGraph]) -> Self {
        let records = |gs: &[DecoratedGraph]| gs.iter().enumerate().map(|(i, g)| GraphRecord::new(i, g)).collect();
        GraphsArtifact {
            format: GRAPHS_FORMAT.to_string(),
            configuration: ConfigRecord::new(cfg),
            caps: cfg.caps.clone(),
            graphs: records(graphs),
            pure_loops: records(pure_loops),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let a: GraphsArtifact = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if a.format != GRAPHS_FORMAT {
            return Err(format!("unsupported format {:?}", a.format));
        }
        Ok(a)
    }

    pub fn decode(&self) -> Result<(Vec<DecoratedGraph>, Vec<DecoratedGraph>), String> {
        let all = |rs: &[GraphRecord]| rs.iter().map(GraphRecord::decode).collect::<Result<Vec<_>, _>>();
        Ok((all(&self.graphs)?, all(&self.pure_loops)?))
    }

    pub fn to_dot(&self) -> Result<String, String> {
        let mut out = String::new();
        for r in &self.graphs {
            out.push_str(&to_dot(&r.decode()?, &format!("g{}", r.index)));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorRecord {
    pub label: String,
    pub degree: Option<i64>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContributionEntry {
    pub index: usize,
    pub canonical: String,
    pub automorphisms: u64,
    pub edge_group: u64,
    pub prefactor: String,
    pub sign: i64,
    pub fixed_tokens: Vec<String>,
    pub webs: Vec<Vec<usize>>,
    pub factors: Vec<FactorRecord>,
    pub inverse_euler: String,
    pub degree: Option<i64>,
    pub term: String,
    pub resolved: Option<String>,
}

impl ContributionEntry {
    pub fn new(index: usize, e: &LedgerEntry) -> Self {
        let c = &e.contribution;
        ContributionEntry {
            index,
            canonical: c.canonical.to_string(),
            automorphisms: c.automorphisms,
            edge_group: c.edge_group,
            prefactor: c.prefactor.to_string(),
            sign: c.fixed.sign,
            fixed_tokens: c.fixed.tokens.clone(),
            webs: c.webs.clone(),
            factors: c
                .factors
                .iter()
                .map(|f| FactorRecord { label: f.label(), degree: f.degree, value: f.value.to_string() })
                .collect(),
            inverse_euler: c.inverse_euler.to_string(),
            degree: c.degree,
            term: e.term.to_string(),
            resolved: e.resolved.as_ref().map(|r| r.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupRecord {
    pub tokens: Vec<String>,
    pub sum: String,
}

/// Contents of contributions.json.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContributionsArtifact {
    pub format: String,
    pub configuration: ConfigRecord,
    pub oracle: String,
    pub evaluation: EvalSettings,
    pub entries: Vec<ContributionEntry>,
    pub groups: Vec<GroupRecord>,
    pub total: Option<String>,
}

impl ContributionsArtifact {
    pub fn new(cfg: &ResolvedConfig, oracle: &str, report: &SumReport) -> Self {
        ContributionsArtifact {
            format: CONTRIBUTIONS_FORMAT.to_string(),
            configuration: ConfigRecord::new(cfg),
            oracle: oracle.to_string(),
            evaluation: cfg.evaluation,
            entries: report.entries.iter().enumerate().map(|(i, e)| ContributionEntry::new(i, e)).collect(),
            groups: report
                .groups
                .iter()
                .map(|(tokens, sum)| GroupRecord { tokens: tokens.clone(), sum: sum.to_string() })
                .collect(),
            total: report.total.as_ref().map(|t| t.to_string()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }
}

/// One line of summary.csv.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub index: usize,
    pub canonical: String,
    pub vertices: usize,
    pub edges: usize,
    pub automorphisms: u64,
    pub edge_group: u64,
    pub prefactor: String,
    pub degree: Option<i64>,
    pub term: String,
    pub resolved: Option<String>,
}

impl SummaryRow {
    pub fn new(index: usize, e: &LedgerEntry) -> Self {
        let c = &e.contribution;
        SummaryRow {
            index,
            canonical: c.canonical.to_string(),
            vertices: c.graph.vertices.len(),
            edges: c.graph.edges.len(),
            automorphisms: c.automorphisms,
            edge_group: c.edge_group,
            prefactor: c.prefactor.to_string(),
            degree: c.degree,
            term: e.term.to_string(),
            resolved: e.resolved.as_ref().map(|r| r.to_string()),
        }
    }
}

const SUMMARY_HEADER: [&str; 10] =
    ["index", "canonical", "vertices", "edges", "automorphisms", "edge_group", "prefactor", "degree", "term", "resolved"];

pub(crate) fn summary_csv(report: &SumReport) -> Result<Vec<u8>, IoError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    // The header is written even when there are no rows.
    w.write_record(SUMMARY_HEADER).map_err(|e| IoError::Other(e.to_string()))?;
    for (i, e) in report.entries.iter().enumerate() {
        w.serialize(SummaryRow::new(i, e)).map_err(|e| IoError::Other(e.to_string()))?;
    }
    w.into_inner().map_err(|e| IoError::Other(e.to_string()))
}
