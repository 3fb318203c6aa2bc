//! Enumeration of flat regular decorated graphs up to isomorphism.

pub mod brute;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::algebra::qi;
use crate::graph::{canon, CanonicalForm, DecoratedGraph, GraphClass, Level};
use crate::model::{DiscreteData, ModelError, WeightSystem};

pub use brute::brute_force_enumerate;

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerationCaps {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Bound on `k * |dL|` for every edge.
    pub max_edge_degree_numerator: u32,
    pub max_vertex_genus: u32,
    /// Bound on the number of edges joining two infinity vertices.
    pub max_web_edges: usize,
}

impl EnumerationCaps {
    /// Bounds that no flat regular graph for `(ws, dd)` can exceed.
    ///
    /// With `D0 = k d0` and `Dinf = k dinf`: edges carrying level-0 degree
    /// number at most `D0`; every E1Inf edge adds at least one unit to
    /// `Dinf` once stable infinity vertices, legs and web edges are paid
    /// for, which gives at most `Dinf + D0 + l + 2g` of them.
    pub fn natural(ws: &WeightSystem, dd: &DiscreteData) -> Self {
        let (d0n, dinfn) = scaled_degrees(ws, dd);
        let slack = (dinfn + d0n + dd.markings.len() as i64 + 2 * dd.genus as i64).max(0);
        let edges = (d0n.max(0) + slack) as usize;
        EnumerationCaps {
            max_vertices: edges + 1,
            max_edges: edges,
            max_edge_degree_numerator: d0n.max(slack + 1).max(2) as u32,
            max_vertex_genus: dd.genus,
            max_web_edges: d0n.max(0) as usize,
        }
    }
}

/// A cap that is below the proven bound, so part of the search space was
/// not visited.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub struct Truncation {
    pub cap: String,
    pub limit: u64,
    pub bound: u64,
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} is below the bound {}", self.cap, self.limit, self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("search truncated: {}", .0.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("; "))]
    CapExceeded(Vec<Truncation>),
    #[error("caps too large for brute force (at most {0} vertices and edges)")]
    CapTooLarge(usize),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Debug, Default)]
pub struct EnumerationResult {
    /// Regular graphs in canonical order.
    pub graphs: Vec<DecoratedGraph>,
    /// Pure loops, reported separately and never summed.
    pub pure_loops: Vec<DecoratedGraph>,
    pub truncation: Vec<Truncation>,
    pub shards: usize,
}

impl EnumerationResult {
    pub fn is_truncated(&self) -> bool {
        !self.truncation.is_empty()
    }

    pub fn strict(self) -> Result<Self, EnumError> {
        if self.is_truncated() {
            Err(EnumError::CapExceeded(self.truncation))
        } else {
            Ok(self)
        }
    }
}

pub(crate) fn scaled_degrees(ws: &WeightSystem, dd: &DiscreteData) -> (i64, i64) {
    let k = qi(ws.k() as i64);
    let d0 = (&dd.d0 * &k).to_integer().to_i64().unwrap_or(i64::MAX);
    let dinf = (&dd.dinf * &k).to_integer().to_i64().unwrap_or(i64::MAX);
    (d0, dinf)
}

fn truncations(caps: &EnumerationCaps, natural: &EnumerationCaps) -> Vec<Truncation> {
    let mut out = Vec::new();
    let mut check = |cap: &str, limit: u64, bound: u64| {
        if limit < bound {
            out.push(Truncation { cap: cap.to_string(), limit, bound });
        }
    };
    check("max_vertices", caps.max_vertices as u64, natural.max_vertices as u64);
    check("max_edges", caps.max_edges as u64, natural.max_edges as u64);
    check(
        "max_edge_degree_numerator",
        caps.max_edge_degree_numerator as u64,
        natural.max_edge_degree_numerator as u64,
    );
    check("max_vertex_genus", caps.max_vertex_genus as u64, natural.max_vertex_genus as u64);
    check("max_web_edges", caps.max_web_edges as u64, natural.max_web_edges as u64);
    out
}

/// A vertex shape before degrees and legs are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexType {
    pub level: Level,
    pub hour: Option<u32>,
    pub genus: u32,
}

/// Search-space partition: vertex count and sorted vertex types.
pub type ShardKey = Vec<VertexType>;

pub(crate) struct Found {
    pub regular: BTreeMap<CanonicalForm, DecoratedGraph>,
    pub loops: BTreeMap<CanonicalForm, DecoratedGraph>,
}

/// Enumerate every flat regular graph for `(ws, dd)` within `caps`, using
/// the global rayon pool.
pub fn enumerate_flat_regular(
    ws: &WeightSystem,
    dd: &DiscreteData,
    caps: &EnumerationCaps,
) -> Result<EnumerationResult, EnumError> {
    dd.validate(ws)?;
    let shards = search::shards(ws, dd, caps);
    let parts: Vec<Found> = shards.par_iter().map(|s| search::search_shard(ws, dd, caps, s)).collect();
    let mut regular = BTreeMap::new();
    let mut loops = BTreeMap::new();
    for p in parts {
        regular.extend(p.regular);
        loops.extend(p.loops);
    }
    Ok(EnumerationResult {
        graphs: regular.into_values().collect(),
        pure_loops: loops.into_values().collect(),
        truncation: truncations(caps, &EnumerationCaps::natural(ws, dd)),
        shards: shards.len(),
    })
}

/// As [`enumerate_flat_regular`] on a dedicated pool of `threads` workers.
pub fn enumerate_with_threads(
    ws: &WeightSystem,
    dd: &DiscreteData,
    caps: &EnumerationCaps,
    threads: usize,
) -> Result<EnumerationResult, EnumError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| EnumError::ThreadPool(e.to_string()))?;
    pool.install(|| enumerate_flat_regular(ws, dd, caps))
}

pub(crate) fn insert_canonical(found: &mut Found, g: DecoratedGraph, class: GraphClass) {
    let canon = canon::canonicalize(&g);
    let key = canon::canonical_form(&canon);
    match class {
        GraphClass::Regular => found.regular.entry(key).or_insert(canon),
        GraphClass::PureLoop => found.loops.entry(key).or_insert(canon),
        GraphClass::Irregular => return,
    };
}
