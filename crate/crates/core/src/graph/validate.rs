use std::fmt;

use num_traits::{Signed, Zero};

use super::monodromy::sector_of;
use super::{DecoratedGraph, EdgeType, Level, Unstable};
use crate::algebra::{qi, Q};
use crate::model::{DiscreteData, Marking, WeightSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    NoVertices,
    HourMissing,
    HourUnexpected,
    HourOutOfRange,
    BadEndpoint,
    SelfLoop,
    EdgeLevels,
    E11HoursEqual,
    E1InfHoursDiffer,
    EInfInfHoursEqual,
    E01Degree,
    E11Degree,
    E1InfDegree,
    E0InfDegree,
    EInfInfDegree,
    DegreeLattice,
    SchemeEdge,
    VertexDegree,
    UnstableVertex,
    Disconnected,
    DegreeConservation,
    GenusConservation,
    LegSet,
    LegLevel,
    LegSector,
    InvalidMarking,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Graph,
    Vertex(usize),
    Edge(usize),
    Leg(usize),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Graph => write!(f, "graph"),
            Element::Vertex(v) => write!(f, "vertex {v}"),
            Element::Edge(e) => write!(f, "edge {e}"),
            Element::Leg(i) => write!(f, "leg {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub element: Element,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.detail, self.element)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, element: Element, detail: impl Into<String>) {
        self.violations.push(Violation { kind, element, detail: detail.into() });
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "invalid: {}", parts.join("; "))
    }
}

/// Forced degree of the negative-level line bundle on a stable vertex at
/// level infinity: `-(2g - 2 + n) / k`.
pub fn forced_inf_degree(graph: &DecoratedGraph, v: usize, k: u32) -> Q {
    Q::new((-graph.euler_char(v)).into(), (k as i64).into())
}

/// Degree of the log canonical bundle on an EInfInf edge curve: each end is
/// a special point unless it is a contracted smooth point.
pub fn einf_log_degree(graph: &DecoratedGraph, e: usize) -> i64 {
    let (a, b) = graph.edges[e].ends;
    let special = [a, b]
        .iter()
        .filter(|&&v| graph.unstable_kind(v) != Some(Unstable::V01))
        .count();
    special as i64 - 2
}

pub fn validate(graph: &DecoratedGraph, ws: &WeightSystem, dd: &DiscreteData) -> ValidityReport {
    use ViolationKind as K;
    let mut r = ValidityReport::default();
    let k = ws.k();
    let nv = graph.vertices.len();
    if nv == 0 {
        r.push(K::NoVertices, Element::Graph, "graph has no vertices");
        return r;
    }

    for (i, v) in graph.vertices.iter().enumerate() {
        let el = Element::Vertex(i);
        match (v.level, v.hour) {
            (Level::Zero, Some(_)) => r.push(K::HourUnexpected, el, "level-0 vertex carries an hour"),
            (Level::One | Level::Inf, None) => r.push(K::HourMissing, el, "vertex needs an hour"),
            (_, Some(h)) if h == 0 || h > dd.hours => {
                r.push(K::HourOutOfRange, el, format!("hour {h} outside 1..={}", dd.hours))
            }
            _ => {}
        }
        for d in [&v.d0, &v.dinf] {
            if !ws.admits_degree(d) {
                r.push(K::DegreeLattice, el, format!("degree {d} not in (1/{k})Z"));
            }
        }
    }

    let mut endpoints_ok = true;
    for (i, e) in graph.edges.iter().enumerate() {
        let el = Element::Edge(i);
        let (a, b) = e.ends;
        if a >= nv || b >= nv {
            r.push(K::BadEndpoint, el, "endpoint out of range");
            endpoints_ok = false;
            continue;
        }
        if a == b {
            r.push(K::SelfLoop, el, "edge is a self-loop");
            continue;
        }
        let (va, vb) = (&graph.vertices[a], &graph.vertices[b]);
        if EdgeType::between(va.level, vb.level) != Some(e.kind) {
            r.push(K::EdgeLevels, el, format!("{} edge joins levels {} and {}", e.kind, va.level, vb.level));
            continue;
        }
        for d in [&e.d0, &e.dinf] {
            if !ws.admits_degree(d) {
                r.push(K::DegreeLattice, el, format!("degree {d} not in (1/{k})Z"));
            }
        }
        let dl = e.d_l();
        match e.kind {
            EdgeType::E01 => {
                if !dl.is_positive() || !e.dinf.is_zero() {
                    r.push(K::E01Degree, el, "E01 degree must be positive");
                }
            }
            EdgeType::E11 => {
                if va.hour == vb.hour {
                    r.push(K::E11HoursEqual, el, "E11 hours equal");
                }
                if !dl.is_positive() || !dl.is_integer() || !e.dinf.is_zero() {
                    r.push(K::E11Degree, el, "E11 degree must be a positive integer");
                }
            }
            EdgeType::E1Inf => {
                if va.hour != vb.hour {
                    r.push(K::E1InfHoursDiffer, el, "E1Inf endpoints have different hours");
                }
                if !e.d0.is_zero() || !e.dinf.is_positive() {
                    r.push(K::E1InfDegree, el, "E1Inf degree must be negative");
                }
            }
            EdgeType::E0Inf => {
                if !e.d0.is_positive() || !e.dinf.is_positive() {
                    r.push(K::E0InfDegree, el, "E0Inf degrees must be positive");
                }
            }
            EdgeType::EInfInf => {
                if va.hour == vb.hour {
                    r.push(K::EInfInfHoursEqual, el, "EInfInf hours equal");
                }
                if !e.d0.is_positive() {
                    r.push(K::EInfInfDegree, el, "EInfInf degree d0 must be positive");
                }
                if dl * qi(k as i64) != qi(einf_log_degree(graph, i)) {
                    r.push(K::EInfInfDegree, el, "EInfInf line degree must balance the log canonical degree");
                }
            }
        }
    }
    if !endpoints_ok {
        return r;
    }

    for i in 0..nv {
        let v = &graph.vertices[i];
        let el = Element::Vertex(i);
        if graph.is_stable(i) {
            let ok = match v.level {
                Level::Zero => v.dinf.is_zero() && !v.d0.is_negative(),
                Level::One => v.d0.is_zero() && v.dinf.is_zero(),
                Level::Inf => v.d0.is_zero() && v.dinf == forced_inf_degree(graph, i, k),
            };
            if !ok {
                r.push(K::VertexDegree, el, format!("degree ({}, {}) not allowed at level {}", v.d0, v.dinf, v.level));
            }
            continue;
        }
        match graph.unstable_kind(i) {
            None => r.push(K::UnstableVertex, el, "contracted vertex of invalid shape"),
            Some(kind) => {
                if !v.d0.is_zero() || !v.dinf.is_zero() {
                    r.push(K::UnstableVertex, el, "contracted vertex carries degree");
                }
                if kind == Unstable::V01 && v.level == Level::Inf {
                    let e = graph.edges_at(i).next().unwrap();
                    let edge = &graph.edges[e];
                    if edge.kind == EdgeType::E1Inf && edge.d_l() * qi(k as i64) == qi(-1) {
                        r.push(K::SchemeEdge, Element::Edge(e), "E1Inf edge with two scheme ends is unstable");
                    }
                }
            }
        }
    }

    if graph.components() != 1 {
        r.push(K::Disconnected, Element::Graph, "graph is disconnected");
    }
    let (d0, dinf) = graph.total_degree();
    if d0 != dd.d0 || dinf != dd.dinf {
        r.push(
            K::DegreeConservation,
            Element::Graph,
            format!("total degree ({d0}, {dinf}) differs from ({}, {})", dd.d0, dd.dinf),
        );
    }
    if graph.total_genus() != dd.genus as i64 {
        r.push(
            K::GenusConservation,
            Element::Graph,
            format!("total genus {} differs from {}", graph.total_genus(), dd.genus),
        );
    }

    check_legs(graph, ws, dd, &mut r);
    r
}

fn check_legs(graph: &DecoratedGraph, ws: &WeightSystem, dd: &DiscreteData, r: &mut ValidityReport) {
    use ViolationKind as K;
    let legs = graph.legs();
    let expected: Vec<(usize, Marking)> = dd.markings.iter().copied().enumerate().collect();
    let got: Vec<(usize, Marking)> = legs.iter().map(|l| (l.index, l.marking)).collect();
    if got != expected {
        r.push(K::LegSet, Element::Graph, "legs do not match the markings");
    }
    for (i, v) in graph.vertices.iter().enumerate() {
        for leg in &v.legs {
            let el = Element::Leg(leg.index);
            match leg.marking {
                Marking::Narrow(m) => {
                    if m >= ws.k() || !ws.is_narrow_sector(m) {
                        r.push(K::InvalidMarking, el, format!("narrow:{m} is not narrow"));
                    }
                    if v.level == Level::One {
                        r.push(K::LegLevel, el, "narrow leg at level 1");
                    }
                    if v.level == Level::Inf && graph.unstable_kind(i) == Some(Unstable::V11) {
                        let e = graph.edges_at(i).next().unwrap();
                        let edge = &graph.edges[e];
                        if edge.kind == EdgeType::E1Inf && sector_of(&edge.d_l(), ws.k()) != Some(m) {
                            r.push(K::LegSector, el, "leg sector differs from the edge monodromy");
                        }
                    }
                }
                Marking::RhoUnit => {
                    if v.level == Level::Inf {
                        r.push(K::LegLevel, el, "rho leg at level infinity");
                    }
                }
            }
        }
    }
}
