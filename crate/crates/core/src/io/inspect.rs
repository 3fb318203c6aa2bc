use std::fmt;
use std::path::Path;

use super::artifacts::{GraphRecord, GraphsArtifact};
use super::IoError;
use crate::graph::dot::to_dot;
use crate::graph::EdgeType;

const EDGE_TYPES: [EdgeType; 5] = [EdgeType::E01, EdgeType::E11, EdgeType::E1Inf, EdgeType::E0Inf, EdgeType::EInfInf];

/// Conjunction of conditions on a graph record; empty matches everything.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InspectFilter {
    pub has_edge: Vec<EdgeType>,
    pub lacks_edge: Vec<EdgeType>,
    /// Vertex counts at levels 0, 1 and infinity.
    pub levels: Option<[usize; 3]>,
    pub automorphisms: Option<u64>,
    pub canonical: Option<String>,
}

impl InspectFilter {
    /// Edge type by name, ignoring case (`E01`, `E11`, `E1Inf`, `E0Inf`, `EInfInf`).
    pub fn parse_edge_type(s: &str) -> Result<EdgeType, String> {
        EDGE_TYPES
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown edge type {s:?}"))
    }

    /// Level profile `n0/n1/ninf`.
    pub fn parse_levels(s: &str) -> Result<[usize; 3], String> {
        let parts: Vec<usize> = s
            .split('/')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| format!("bad level profile {s:?}; expected n0/n1/ninf"))?;
        <[usize; 3]>::try_from(parts).map_err(|_| format!("bad level profile {s:?}; expected n0/n1/ninf"))
    }

    pub fn matches(&self, r: &GraphRecord) -> bool {
        let count = |t: &EdgeType| r.edge_types.get(t.name()).copied().unwrap_or(0);
        self.has_edge.iter().all(|t| count(t) > 0)
            && self.lacks_edge.iter().all(|t| count(t) == 0)
            && self.levels.is_none_or(|l| l == r.levels)
            && self.automorphisms.is_none_or(|a| a == r.automorphisms)
            && self.canonical.as_ref().is_none_or(|c| *c == r.canonical)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InspectRow {
    pub index: usize,
    pub levels: [usize; 3],
    pub edges: String,
    pub automorphisms: u64,
    pub canonical: String,
    pub dot: String,
}

impl InspectRow {
    pub const HEADER: &'static str = "index\tlevels\tedges\taut\tcanonical";
}

impl fmt::Display for InspectRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.levels;
        write!(f, "{}\t{a}/{b}/{c}\t{}\t{}\t{}", self.index, self.edges, self.automorphisms, self.canonical)
    }
}

pub fn load_graphs(path: &Path) -> Result<GraphsArtifact, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::fs(path, e))?;
    let artifact = GraphsArtifact::from_json(&text).map_err(|e| IoError::malformed(path, e))?;
    artifact.decode().map_err(|e| IoError::malformed(path, e))?;
    Ok(artifact)
}

/// Rows of the graphs passing `filter`, in file order.
pub fn inspect(artifact: &GraphsArtifact, filter: &InspectFilter) -> Result<Vec<InspectRow>, IoError> {
    let mut rows = Vec::new();
    for r in artifact.graphs.iter().filter(|r| filter.matches(r)) {
        let g = r.decode().map_err(IoError::Other)?;
        let edges = EDGE_TYPES
            .iter()
            .filter_map(|t| r.edge_types.get(t.name()).map(|n| format!("{t}:{n}")))
            .collect::<Vec<_>>()
            .join(",");
        rows.push(InspectRow {
            index: r.index,
            levels: r.levels,
            edges: if edges.is_empty() { "-".to_string() } else { edges },
            automorphisms: r.automorphisms,
            canonical: r.canonical.clone(),
            dot: to_dot(&g, &format!("g{}", r.index)),
        });
    }
    Ok(rows)
}
