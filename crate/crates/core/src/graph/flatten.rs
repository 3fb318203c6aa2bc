use num_traits::Zero;

use super::monodromy::flag_monodromy;
use super::{DecoratedGraph, Edge, EdgeType, GraphError, Level, Unstable, VertexId};
use crate::model::{Marking, WeightSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphClass {
    Regular,
    Irregular,
    PureLoop,
}

/// Whether the node `v` joining two edges is balanced.
///
/// Only a level-1 node between an E01 edge and an E1Inf edge whose
/// infinity end is a special point can be balanced; there the criterion is
/// that the two line-bundle degrees cancel.
pub fn is_balanced(graph: &DecoratedGraph, v: VertexId) -> Result<bool, GraphError> {
    let vx = &graph.vertices[v];
    let edges: Vec<_> = graph.edges_at(v).collect();
    if edges.len() != 2 || !vx.legs.is_empty() || vx.genus != 0 || !vx.d0.is_zero() || !vx.dinf.is_zero() {
        return Err(GraphError::NotAValenceTwoVertex(v));
    }
    if vx.level != Level::One {
        return Ok(false);
    }
    let (e01, e1inf) = match (graph.edges[edges[0]].kind, graph.edges[edges[1]].kind) {
        (EdgeType::E01, EdgeType::E1Inf) => (edges[0], edges[1]),
        (EdgeType::E1Inf, EdgeType::E01) => (edges[1], edges[0]),
        _ => return Ok(false),
    };
    let far = graph.edges[e1inf].other(v);
    if graph.unstable_kind(far) == Some(Unstable::V01) {
        return Ok(false);
    }
    Ok((graph.edges[e01].d_l() + graph.edges[e1inf].d_l()).is_zero())
}

pub fn balanced_vertices(graph: &DecoratedGraph) -> Vec<VertexId> {
    (0..graph.vertices.len())
        .filter(|&v| is_balanced(graph, v).unwrap_or(false))
        .collect()
}

/// Replace every balanced node by a single E0Inf edge carrying the level-0
/// degree of its E01 side and the infinity degree of its E1Inf side.
pub fn flatten(graph: &DecoratedGraph) -> DecoratedGraph {
    let mut g = graph.clone();
    loop {
        let Some(v) = balanced_vertices(&g).into_iter().next() else {
            return g;
        };
        let edges: Vec<_> = g.edges_at(v).collect();
        let (e01, e1inf) = if g.edges[edges[0]].kind == EdgeType::E01 {
            (edges[0], edges[1])
        } else {
            (edges[1], edges[0])
        };
        let zero_end = g.edges[e01].other(v);
        let inf_end = g.edges[e1inf].other(v);
        let merged = Edge::new(
            EdgeType::E0Inf,
            zero_end,
            inf_end,
            g.edges[e01].d0.clone(),
            g.edges[e1inf].dinf.clone(),
        );
        let mut edges_out: Vec<Edge> = g
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != e01 && *i != e1inf)
            .map(|(_, e)| e.clone())
            .collect();
        edges_out.push(merged);
        let remap = |u: VertexId| if u > v { u - 1 } else { u };
        for e in &mut edges_out {
            e.ends = (remap(e.ends.0), remap(e.ends.1));
        }
        let mut vertices = g.vertices.clone();
        vertices.remove(v);
        g = DecoratedGraph::new(vertices, edges_out);
    }
}

pub fn is_flat(graph: &DecoratedGraph) -> bool {
    balanced_vertices(graph).is_empty()
}

pub fn classify(graph: &DecoratedGraph, ws: &WeightSystem) -> Result<GraphClass, GraphError> {
    if let Some(v) = balanced_vertices(graph).into_iter().next() {
        return Err(GraphError::NotFlat(v));
    }
    let n = graph.vertices.len();
    if n > 0 && graph.stable_vertices().next().is_none() && (0..n).all(|v| graph.valence(v) == 2) {
        return Ok(GraphClass::PureLoop);
    }
    if graph.count_edges(EdgeType::E0Inf) > 0 {
        return Ok(GraphClass::Irregular);
    }
    for v in 0..n {
        if graph.vertices[v].level == Level::Inf && !infinity_vertex_is_regular(graph, v, ws)? {
            return Ok(GraphClass::Irregular);
        }
    }
    Ok(GraphClass::Regular)
}

/// Allowed insertions at a stable infinity vertex are the sectors 1 and,
/// when narrow, 2. A contracted infinity end of an E1Inf edge must be
/// stacky with a narrow sector.
pub fn infinity_vertex_is_regular(graph: &DecoratedGraph, v: VertexId, ws: &WeightSystem) -> Result<bool, GraphError> {
    let k = ws.k();
    let allowed = |b: u32| b == 1 || (b == 2 && ws.is_narrow_sector(2));
    let stable = graph.is_stable(v);
    if stable {
        for leg in &graph.vertices[v].legs {
            match leg.marking {
                Marking::Narrow(m) if allowed(m) => {}
                _ => return Ok(false),
            }
        }
    }
    for e in graph.edges_at(v) {
        if graph.edges[e].kind != EdgeType::E1Inf {
            continue;
        }
        let b = flag_monodromy(graph, e, v, k)?.b;
        let ok = if stable { allowed(b) } else { b != k && ws.is_narrow_sector(b) };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
