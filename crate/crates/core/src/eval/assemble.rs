use num_traits::One;

use super::formulas::{edge_contribution, flag_factor, vertex_contribution, vertex_token};
use super::{EvalContext, EvalError};
use crate::algebra::{standard_grading, Q, RatFunc, Variable};
use crate::graph::{
    automorphism_order, canonical_form, classify, validate, CanonicalForm, DecoratedGraph, EdgeId, EdgeType, GraphClass,
    Level, VertexId,
};
use crate::model::DiscreteData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    Vertex(VertexId),
    Edge(EdgeId),
    Flag(EdgeId, VertexId),
    Web(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factor {
    pub kind: FactorKind,
    pub value: RatFunc,
    /// Degree under the standard grading with tokens of degree 0.
    pub degree: Option<i64>,
}

impl Factor {
    fn new(kind: FactorKind, value: RatFunc) -> Self {
        let degree = value.homogeneous_degree(&standard_grading);
        Factor { kind, value, degree }
    }

    pub fn label(&self) -> String {
        match self.kind {
            FactorKind::Vertex(v) => format!("A_v{v}"),
            FactorKind::Edge(e) => format!("A'_e{e}"),
            FactorKind::Flag(e, v) => format!("A_(e{e},v{v})"),
            FactorKind::Web(w) => format!("A_inf_w{w}"),
        }
    }
}

/// Sign and opaque classes of the fixed part of the virtual cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixedPart {
    pub sign: i64,
    pub tokens: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SiteKind {
    /// Stable level-0 vertex: virtual class of stable maps to the hypersurface.
    LevelZero(VertexId),
    /// Contracted level-0 vertex: the fundamental class of the hypersurface.
    Point(VertexId),
    /// Stable level-1 vertex: the moduli space of curves.
    LevelOne(VertexId),
    /// A web at infinity, by index into `webs`.
    Web(usize),
}

/// One integration domain of the fixed part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site {
    pub kind: SiteKind,
    pub key: String,
    /// ψ classes of the site in query order.
    pub psi: Vec<Variable>,
    /// Number of marked points besides the ψ-carrying flags.
    pub extra_points: usize,
    /// Hyperplane variables identified with one class on the site.
    pub hyperplanes: Vec<Variable>,
    /// Opaque factors absorbed by the correlator value.
    pub tokens: Vec<Variable>,
    /// Weighted degree bound of the integrand.
    pub cap: u32,
    /// Only integrands of degree exactly `cap` contribute.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphContribution {
    pub graph: DecoratedGraph,
    pub canonical: CanonicalForm,
    pub automorphisms: u64,
    pub edge_group: u64,
    /// `1/(|Aut| |G_E|)`.
    pub prefactor: Q,
    pub fixed: FixedPart,
    pub factors: Vec<Factor>,
    /// Product of all factor values.
    pub inverse_euler: RatFunc,
    /// Sum of the factor degrees, when every factor is homogeneous.
    pub degree: Option<i64>,
    pub webs: Vec<Vec<VertexId>>,
    pub sites: Vec<Site>,
}

impl GraphContribution {
    /// `prefactor * sign * inverse_euler`, tokens left symbolic.
    pub fn term(&self) -> RatFunc {
        self.inverse_euler.scale(&(&self.prefactor * Q::from_integer(self.fixed.sign.into())))
    }
}

/// Connected pieces of the infinity subgraph joined by EInfInf edges that have
/// a stable vertex or an edge, ordered by least vertex id.
pub fn webs(graph: &DecoratedGraph) -> Vec<Vec<VertexId>> {
    let inf: Vec<VertexId> = (0..graph.vertices.len()).filter(|&v| graph.vertices[v].level == Level::Inf).collect();
    let mut comp: Vec<Option<usize>> = vec![None; graph.vertices.len()];
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for &root in &inf {
        if comp[root].is_some() {
            continue;
        }
        let id = out.len();
        let mut members = vec![root];
        comp[root] = Some(id);
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            for e in graph.edges_at(v) {
                let edge = &graph.edges[e];
                let w = edge.other(v);
                if edge.kind == EdgeType::EInfInf && comp[w].is_none() {
                    comp[w] = Some(id);
                    members.push(w);
                }
            }
            i += 1;
        }
        members.sort();
        out.push(members);
    }
    out.retain(|m| {
        m.iter().any(|&v| graph.is_stable(v))
            || m.iter().any(|&v| graph.edges_at(v).any(|e| graph.edges[e].kind == EdgeType::EInfInf))
    });
    out
}

fn moduli_dim(graph: &DecoratedGraph, v: VertexId) -> u32 {
    (3 * graph.vertices[v].genus as i64 - 3 + graph.special_points(v) as i64).max(0) as u32
}

fn psi_of(e: EdgeId, v: VertexId) -> Variable {
    Variable::psi(e as u32, v as u32)
}

fn web_key(graph: &DecoratedGraph, members: &[VertexId], k: u32) -> String {
    let mut parts: Vec<String> = members
        .iter()
        .map(|&v| {
            let vx = &graph.vertices[v];
            let legs: Vec<String> = vx.legs.iter().map(|l| l.marking.to_string()).collect();
            let mut flags: Vec<String> = graph
                .edges_at(v)
                .filter(|&e| graph.edges[e].kind == EdgeType::E1Inf)
                .map(|e| {
                    crate::graph::flag_monodromy(graph, e, v, k).map(|m| m.to_string()).unwrap_or_default()
                })
                .collect();
            flags.sort();
            format!(
                "g={},h={},d={},legs=[{}],flags=[{}]",
                vx.genus,
                vx.hour.unwrap_or(0),
                vx.dinf,
                legs.join(","),
                flags.join(",")
            )
        })
        .collect();
    parts.sort();
    let mut internal: Vec<String> = graph
        .edges
        .iter()
        .filter(|e| e.kind == EdgeType::EInfInf && members.contains(&e.ends.0))
        .map(|e| format!("{}/{}", e.d0, e.dinf))
        .collect();
    internal.sort();
    format!("web:{}|{}", parts.join(";"), internal.join(","))
}

fn sites(graph: &DecoratedGraph, webs: &[Vec<VertexId>], k: u32) -> Vec<Site> {
    let mut out = Vec::new();
    for v in 0..graph.vertices.len() {
        let vx = &graph.vertices[v];
        let stable = graph.is_stable(v);
        let flags: Vec<EdgeId> = graph.edges_at(v).collect();
        let hyperplanes: Vec<Variable> = flags
            .iter()
            .filter(|&&e| graph.edges[e].kind == EdgeType::E01)
            .map(|&e| Variable::h(e as u32))
            .collect();
        let psi: Vec<Variable> = flags.iter().map(|&e| psi_of(e, v)).collect();
        let markings: Vec<String> = vx.legs.iter().map(|l| l.marking.to_string()).collect();
        match (vx.level, stable) {
            (Level::Zero, true) => out.push(Site {
                kind: SiteKind::LevelZero(v),
                key: format!("gw:g={},d={},markings=[{}]", vx.genus, vx.d0, markings.join(",")),
                psi,
                extra_points: vx.legs.len(),
                hyperplanes,
                tokens: vec![vertex_token(graph, v)],
                cap: graph.special_points(v) as u32,
                exact: false,
            }),
            (Level::Zero, false) => out.push(Site {
                kind: SiteKind::Point(v),
                key: "point".to_string(),
                psi: Vec::new(),
                extra_points: 0,
                hyperplanes,
                tokens: Vec::new(),
                cap: 3,
                exact: true,
            }),
            (Level::One, true) => out.push(Site {
                kind: SiteKind::LevelOne(v),
                key: format!("mbar:g={},n={}", vx.genus, graph.special_points(v)),
                psi,
                extra_points: vx.legs.len(),
                hyperplanes: Vec::new(),
                tokens: Vec::new(),
                cap: moduli_dim(graph, v),
                exact: true,
            }),
            _ => {}
        }
    }
    for (j, members) in webs.iter().enumerate() {
        let mut psi = Vec::new();
        let mut cap = 0;
        for &v in members.iter().filter(|&&v| graph.is_stable(v)) {
            cap += moduli_dim(graph, v);
            psi.extend(graph.edges_at(v).filter(|&e| graph.edges[e].kind == EdgeType::E1Inf).map(|e| psi_of(e, v)));
        }
        out.push(Site {
            kind: SiteKind::Web(j),
            key: web_key(graph, members, k),
            psi,
            extra_points: 0,
            hyperplanes: Vec::new(),
            tokens: vec![web_token(j)],
            cap,
            exact: false,
        });
    }
    out
}

pub(crate) fn web_token(j: usize) -> Variable {
    Variable::token(&format!("Ainf_w{j}"))
}

/// Full localization term of a regular flat graph with tokens left symbolic.
pub fn assemble_graph(ctx: &EvalContext, graph: &DecoratedGraph, dd: &DiscreteData) -> Result<GraphContribution, EvalError> {
    let report = validate(graph, &ctx.ws, dd);
    if !report.is_valid() {
        return Err(EvalError::Invalid(report.to_string()));
    }
    if classify(graph, &ctx.ws)? != GraphClass::Regular {
        return Err(EvalError::NotRegular);
    }
    let webs = webs(graph);
    let mut factors = Vec::new();
    for v in (0..graph.vertices.len()).filter(|&v| graph.vertices[v].level != Level::Inf) {
        factors.push(Factor::new(FactorKind::Vertex(v), vertex_contribution(ctx, graph, v)?));
    }
    let mut edge_group = 1u64;
    for (e, edge) in graph.edges.iter().enumerate() {
        if edge.kind == EdgeType::EInfInf {
            continue;
        }
        factors.push(Factor::new(FactorKind::Edge(e), edge_contribution(ctx, graph, e)?));
        edge_group *= ctx.options.edge_group.order(graph, e)?;
    }
    for v in graph.stable_vertices() {
        for e in graph.edges_at(v) {
            if graph.edges[e].kind != EdgeType::EInfInf {
                factors.push(Factor::new(FactorKind::Flag(e, v), flag_factor(ctx, graph, e, v)?));
            }
        }
    }
    for j in 0..webs.len() {
        factors.push(Factor::new(FactorKind::Web(j), RatFunc::var(web_token(j))));
    }
    let inverse_euler = factors.iter().map(|f| f.value.clone()).product();
    let degree = factors.iter().map(|f| f.degree).sum::<Option<i64>>();

    let mut fixed = FixedPart { sign: 1, tokens: Vec::new() };
    for v in 0..graph.vertices.len() {
        let vx = &graph.vertices[v];
        match (vx.level, graph.is_stable(v)) {
            (Level::Zero, true) => {
                if vx.genus.is_multiple_of(2) {
                    fixed.sign = -fixed.sign;
                }
                fixed.tokens.push(format!("GW_v{v}"));
            }
            (Level::Zero, false) => {
                fixed.sign = -fixed.sign;
                fixed.tokens.push(format!("Z_v{v}"));
            }
            (Level::One, true) => fixed.tokens.push(format!("Mbar_v{v}")),
            _ => {}
        }
    }
    fixed.tokens.extend((0..webs.len()).map(|j| format!("FJRW_w{j}")));

    let automorphisms = automorphism_order(graph);
    let prefactor = Q::one() / Q::from_integer((automorphisms as u128 * edge_group as u128).into());
    let sites = sites(graph, &webs, ctx.ws.k());
    Ok(GraphContribution {
        graph: graph.clone(),
        canonical: canonical_form(graph),
        automorphisms,
        edge_group,
        prefactor,
        fixed,
        factors,
        inverse_euler,
        degree,
        webs,
        sites,
    })
}
