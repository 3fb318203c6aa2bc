use std::fmt;

use num_traits::ToPrimitive;

use super::{DecoratedGraph, EdgeId, EdgeType, GraphError, Level, VertexId};
use crate::algebra::{qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldTag {
    Rho,
    Phi,
    Bare,
}

/// `zeta_k^b` with `b` in `1..=k`; `b == k` is the trivial element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlagMonodromy {
    pub b: u32,
    pub k: u32,
    pub field: FieldTag,
    /// The flag forces an empty degeneracy locus.
    pub degeneracy_empty: bool,
}

impl FlagMonodromy {
    pub fn is_trivial(&self) -> bool {
        self.b == self.k
    }
}

impl fmt::Display for FlagMonodromy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = if self.is_trivial() { "1".to_string() } else { format!("z{}^{}", self.k, self.b) };
        match self.field {
            FieldTag::Rho => write!(f, "({z},rho)"),
            FieldTag::Phi => write!(f, "({z},phi)"),
            FieldTag::Bare => write!(f, "{z}"),
        }
    }
}

/// `b` in `1..=k` with `d = a + b/k`; `None` unless `k*d` is an integer.
pub fn sector_of(d: &Q, k: u32) -> Option<u32> {
    let kd = d * qi(k as i64);
    if !kd.is_integer() {
        return None;
    }
    let r = kd.to_integer().to_i64()?.rem_euclid(k as i64) as u32;
    Some(if r == 0 { k } else { r })
}

pub fn flag_monodromy(
    graph: &DecoratedGraph,
    e: EdgeId,
    v: VertexId,
    k: u32,
) -> Result<FlagMonodromy, GraphError> {
    let edge = &graph.edges[e];
    if !edge.touches(v) {
        return Err(GraphError::NotAFlag(e, v));
    }
    let level = graph.vertices[v].level;
    let sector = |d: &Q| {
        sector_of(d, k).ok_or_else(|| GraphError::Malformed(format!("edge {e} degree {d} not in (1/{k})Z")))
    };
    let mk = |b, field, degeneracy_empty| FlagMonodromy { b, k, field, degeneracy_empty };
    match (edge.kind, level) {
        (EdgeType::E01, Level::Zero) => {
            let b = sector(&edge.d_l())?;
            Ok(mk(b, FieldTag::Rho, b != k))
        }
        (EdgeType::E01, _) => Ok(mk(k, FieldTag::Rho, false)),
        (EdgeType::E1Inf, Level::One) => Ok(mk(k, FieldTag::Phi, false)),
        (EdgeType::E1Inf, _) => Ok(mk(sector(&edge.d_l())?, FieldTag::Phi, false)),
        (EdgeType::E0Inf, Level::Zero) => Ok(mk(sector(&edge.d0)?, FieldTag::Bare, false)),
        (EdgeType::E0Inf, _) => Ok(mk(sector(&edge.dinf)?, FieldTag::Bare, false)),
        (kind, _) => Err(GraphError::WrongEdgeType(e, kind, "E01, E1Inf, E0Inf")),
    }
}
