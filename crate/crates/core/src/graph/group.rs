use num_traits::{Signed, ToPrimitive};

use super::{DecoratedGraph, EdgeId, EdgeType, GraphError};

/// Order of the generic automorphism group of an edge curve.
pub trait EdgeGroupPolicy: Send + Sync {
    fn order(&self, graph: &DecoratedGraph, e: EdgeId) -> Result<u64, GraphError>;
}

/// `|numerator(d)| * denominator(d)` for the line-bundle degree `d` of the
/// edge: the deck group of a degree-`|d|` cover times the stabilizer of the
/// stacky end. Integer degrees give `|d|`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultEdgeGroup;

impl EdgeGroupPolicy for DefaultEdgeGroup {
    fn order(&self, graph: &DecoratedGraph, e: EdgeId) -> Result<u64, GraphError> {
        let edge = &graph.edges[e];
        if edge.kind == EdgeType::EInfInf {
            return Err(GraphError::UnsupportedEdgeType(edge.kind));
        }
        let d = edge.d_l();
        let n = d.numer().abs().to_u64().unwrap_or(u64::MAX);
        let q = d.denom().to_u64().unwrap_or(u64::MAX);
        Ok((n * q).max(1))
    }
}

pub fn edge_group_order(graph: &DecoratedGraph, e: EdgeId) -> Result<u64, GraphError> {
    DefaultEdgeGroup.order(graph, e)
}
