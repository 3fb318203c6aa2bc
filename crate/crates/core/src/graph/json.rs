//! Stable JSON schema for graphs; rationals are `"p/q"` strings.

use serde::{Deserialize, Serialize};

use super::{DecoratedGraph, Edge, EdgeType, GraphError, Leg, Level, Vertex};
use crate::algebra::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegJson {
    pub index: usize,
    pub marking: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: usize,
    pub level: String,
    pub hour: Option<u32>,
    pub genus: u32,
    pub d0: String,
    pub dinf: String,
    pub legs: Vec<LegJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: usize,
    #[serde(rename = "type")]
    pub kind: String,
    pub ends: [usize; 2],
    pub d0: String,
    pub dinf: String,
    #[serde(rename = "dL")]
    pub d_l: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

pub fn parse_rational(s: &str) -> Result<Q, GraphError> {
    s.trim()
        .parse::<Q>()
        .map_err(|_| GraphError::Malformed(format!("bad rational {s:?}")))
}

fn parse_level(s: &str) -> Result<Level, GraphError> {
    match s {
        "0" => Ok(Level::Zero),
        "1" => Ok(Level::One),
        "inf" => Ok(Level::Inf),
        _ => Err(GraphError::Malformed(format!("bad level {s:?}"))),
    }
}

fn parse_kind(s: &str) -> Result<EdgeType, GraphError> {
    [EdgeType::E01, EdgeType::E11, EdgeType::E1Inf, EdgeType::E0Inf, EdgeType::EInfInf]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| GraphError::Malformed(format!("bad edge type {s:?}")))
}

impl From<&DecoratedGraph> for GraphJson {
    fn from(g: &DecoratedGraph) -> Self {
        GraphJson {
            vertices: g
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| VertexJson {
                    id,
                    level: v.level.to_string(),
                    hour: v.hour,
                    genus: v.genus,
                    d0: v.d0.to_string(),
                    dinf: v.dinf.to_string(),
                    legs: v
                        .legs
                        .iter()
                        .map(|l| LegJson { index: l.index, marking: l.marking.to_string() })
                        .collect(),
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeJson {
                    id,
                    kind: e.kind.name().to_string(),
                    ends: [e.ends.0, e.ends.1],
                    d0: e.d0.to_string(),
                    dinf: e.dinf.to_string(),
                    d_l: e.d_l().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&GraphJson> for DecoratedGraph {
    type Error = GraphError;

    fn try_from(j: &GraphJson) -> Result<Self, GraphError> {
        let mut vertices = Vec::with_capacity(j.vertices.len());
        for (i, v) in j.vertices.iter().enumerate() {
            if v.id != i {
                return Err(GraphError::Malformed(format!("vertex ids must be 0..n, got {}", v.id)));
            }
            let mut legs = Vec::new();
            for l in &v.legs {
                let marking = l.marking.parse().map_err(|e| GraphError::Malformed(format!("{e}")))?;
                legs.push(Leg { index: l.index, marking });
            }
            vertices.push(
                Vertex::new(parse_level(&v.level)?, v.hour, v.genus)
                    .with_degree(parse_rational(&v.d0)?, parse_rational(&v.dinf)?)
                    .with_legs(legs),
            );
        }
        let mut edges = Vec::with_capacity(j.edges.len());
        for (i, e) in j.edges.iter().enumerate() {
            if e.id != i {
                return Err(GraphError::Malformed(format!("edge ids must be 0..n, got {}", e.id)));
            }
            let edge = Edge::new(
                parse_kind(&e.kind)?,
                e.ends[0],
                e.ends[1],
                parse_rational(&e.d0)?,
                parse_rational(&e.dinf)?,
            );
            if edge.d_l() != parse_rational(&e.d_l)? {
                return Err(GraphError::Malformed(format!("edge {i}: dL is not d0 - dinf")));
            }
            if edge.ends.0 >= vertices.len() || edge.ends.1 >= vertices.len() {
                return Err(GraphError::Malformed(format!("edge {i}: endpoint out of range")));
            }
            edges.push(edge);
        }
        Ok(DecoratedGraph::new(vertices, edges))
    }
}
