//! Decorated localization graphs.

pub mod canon;
pub mod dot;
pub mod flatten;
pub mod group;
pub mod json;
pub mod monodromy;
pub mod validate;

use std::fmt;

use num_traits::{Signed, Zero};

use crate::algebra::Q;
use crate::model::Marking;

pub use canon::{automorphism_order, canonical_form, CanonicalForm};
pub use flatten::{classify, flatten, is_balanced, GraphClass};
pub use group::{edge_group_order, DefaultEdgeGroup, EdgeGroupPolicy};
pub use monodromy::{flag_monodromy, FieldTag, FlagMonodromy};
pub use validate::{validate, ValidityReport, Violation};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Zero,
    One,
    Inf,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Zero => "0",
            Level::One => "1",
            Level::Inf => "inf",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeType {
    E01,
    E11,
    E1Inf,
    E0Inf,
    EInfInf,
}

impl EdgeType {
    /// Endpoint levels, lower level first.
    pub fn levels(self) -> (Level, Level) {
        match self {
            EdgeType::E01 => (Level::Zero, Level::One),
            EdgeType::E11 => (Level::One, Level::One),
            EdgeType::E1Inf => (Level::One, Level::Inf),
            EdgeType::E0Inf => (Level::Zero, Level::Inf),
            EdgeType::EInfInf => (Level::Inf, Level::Inf),
        }
    }

    pub fn between(a: Level, b: Level) -> Option<EdgeType> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        match (lo, hi) {
            (Level::Zero, Level::One) => Some(EdgeType::E01),
            (Level::One, Level::One) => Some(EdgeType::E11),
            (Level::One, Level::Inf) => Some(EdgeType::E1Inf),
            (Level::Zero, Level::Inf) => Some(EdgeType::E0Inf),
            (Level::Inf, Level::Inf) => Some(EdgeType::EInfInf),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeType::E01 => "E01",
            EdgeType::E11 => "E11",
            EdgeType::E1Inf => "E1Inf",
            EdgeType::E0Inf => "E0Inf",
            EdgeType::EInfInf => "EInfInf",
        }
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A marked point; `index` refers to the position in the discrete data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Leg {
    pub index: usize,
    pub marking: Marking,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub level: Level,
    /// Present iff the level is 1 or infinity.
    pub hour: Option<u32>,
    pub genus: u32,
    pub d0: Q,
    pub dinf: Q,
    /// Sorted by index.
    pub legs: Vec<Leg>,
}

impl Vertex {
    pub fn new(level: Level, hour: Option<u32>, genus: u32) -> Self {
        Vertex { level, hour, genus, d0: Q::zero(), dinf: Q::zero(), legs: Vec::new() }
    }

    pub fn with_degree(mut self, d0: Q, dinf: Q) -> Self {
        self.d0 = d0;
        self.dinf = dinf;
        self
    }

    pub fn with_legs(mut self, legs: impl IntoIterator<Item = Leg>) -> Self {
        self.legs.extend(legs);
        self.legs.sort();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: (VertexId, VertexId),
    pub kind: EdgeType,
    pub d0: Q,
    pub dinf: Q,
}

impl Edge {
    pub fn new(kind: EdgeType, a: VertexId, b: VertexId, d0: Q, dinf: Q) -> Self {
        Edge { ends: (a, b), kind, d0, dinf }
    }

    /// Degree of the universal line bundle on the edge curve.
    pub fn d_l(&self) -> Q {
        &self.d0 - &self.dinf
    }

    pub fn other(&self, v: VertexId) -> VertexId {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }
}

/// Unstable vertex shapes, named by (legs, edges).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unstable {
    /// A smooth unmarked point of a single edge.
    V01,
    /// A marked point of a single edge.
    V11,
    /// A node joining two edges.
    V02,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecoratedGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {0} has type {1}; operation needs one of {2}")]
    WrongEdgeType(EdgeId, EdgeType, &'static str),
    #[error("vertex {0} is not an unmarked node joining two edges")]
    NotAValenceTwoVertex(VertexId),
    #[error("graph is not flat (vertex {0} is balanced)")]
    NotFlat(VertexId),
    #[error("edge group order undefined for {0} edges")]
    UnsupportedEdgeType(EdgeType),
    #[error("edge {0} is not incident to vertex {1}")]
    NotAFlag(EdgeId, VertexId),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

impl DecoratedGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        DecoratedGraph { vertices, edges }
    }

    pub fn edges_at(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.touches(v))
            .map(|(i, _)| i)
    }

    pub fn valence(&self, v: VertexId) -> usize {
        self.edges_at(v).count()
    }

    /// Number of special points: incident edges plus legs.
    pub fn special_points(&self, v: VertexId) -> usize {
        self.valence(v) + self.vertices[v].legs.len()
    }

    /// `2g - 2 + n` at the vertex.
    pub fn euler_char(&self, v: VertexId) -> i64 {
        2 * self.vertices[v].genus as i64 - 2 + self.special_points(v) as i64
    }

    /// A vertex is a curve component iff it has negative Euler
    /// characteristic, positive degree at level 0, or is the lone vertex of
    /// an edgeless level-0 graph.
    pub fn is_stable(&self, v: VertexId) -> bool {
        let vx = &self.vertices[v];
        self.euler_char(v) > 0
            || (vx.level == Level::Zero && (vx.d0.is_positive() || self.edges.is_empty()))
    }

    pub fn unstable_kind(&self, v: VertexId) -> Option<Unstable> {
        if self.is_stable(v) || self.vertices[v].genus != 0 {
            return None;
        }
        match (self.vertices[v].legs.len(), self.valence(v)) {
            (0, 1) => Some(Unstable::V01),
            (1, 1) => Some(Unstable::V11),
            (0, 2) => Some(Unstable::V02),
            _ => None,
        }
    }

    pub fn stable_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).filter(move |&v| self.is_stable(v))
    }

    /// The endpoint of `e` at `level`, preferring the first end.
    pub fn end_at(&self, e: EdgeId, level: Level) -> Option<VertexId> {
        let (a, b) = self.edges[e].ends;
        if self.vertices[a].level == level {
            Some(a)
        } else if self.vertices[b].level == level {
            Some(b)
        } else {
            None
        }
    }

    pub fn first_betti(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + self.components() as i64
    }

    pub fn components(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for e in &self.edges {
            if e.ends.0 < n && e.ends.1 < n {
                let (a, b) = (find(&mut parent, e.ends.0), find(&mut parent, e.ends.1));
                parent[a] = b;
            }
        }
        (0..n).filter(|&v| find(&mut parent, v) == v).count()
    }

    pub fn total_genus(&self) -> i64 {
        self.vertices.iter().map(|v| v.genus as i64).sum::<i64>() + self.first_betti()
    }

    pub fn total_degree(&self) -> (Q, Q) {
        let mut d0 = Q::zero();
        let mut dinf = Q::zero();
        for v in &self.vertices {
            d0 += &v.d0;
            dinf += &v.dinf;
        }
        for e in &self.edges {
            d0 += &e.d0;
            dinf += &e.dinf;
        }
        (d0, dinf)
    }

    pub fn legs(&self) -> Vec<Leg> {
        let mut all: Vec<Leg> = self.vertices.iter().flat_map(|v| v.legs.iter().copied()).collect();
        all.sort();
        all
    }

    pub fn count_edges(&self, kind: EdgeType) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }
}
