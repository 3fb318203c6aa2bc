//! Shared corpora and independent oracles for the integration tests.
#![allow(dead_code)]

pub mod audits;
pub mod closed_forms;

use std::collections::BTreeMap;

use itertools::Itertools;
use msploc::algebra::{q, qi, RatFunc, Variable, Q};
use msploc::enumerate::{enumerate_flat_regular, EnumerationCaps};
use msploc::graph::monodromy::sector_of;
use msploc::graph::validate::forced_inf_degree;
use msploc::graph::{DecoratedGraph, Edge, EdgeType, Leg, Level, Vertex};
use msploc::model::{DiscreteData, Marking, WeightSystem};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct Case {
    pub ws: WeightSystem,
    pub dd: DiscreteData,
    pub graph: DecoratedGraph,
}

pub fn preset(name: &str) -> WeightSystem {
    WeightSystem::preset(name).unwrap()
}

pub fn markings(names: &[&str]) -> Vec<Marking> {
    names.iter().map(|m| m.parse().unwrap()).collect()
}

pub fn data(ws: &WeightSystem, g: u32, mk: &[&str], d0: (i64, i64), dinf: (i64, i64), n: u32) -> DiscreteData {
    DiscreteData::new(ws, g, markings(mk), q(d0.0, d0.1), q(dinf.0, dinf.1), n).unwrap()
}

/// The discrete data a graph realizes: its totals and its legs in index order.
pub fn data_for(ws: &WeightSystem, graph: &DecoratedGraph, hours: u32) -> DiscreteData {
    let (d0, dinf) = graph.total_degree();
    let mk = graph.legs().iter().map(|l| l.marking).collect();
    DiscreteData::new(ws, graph.total_genus() as u32, mk, d0, dinf, hours).unwrap()
}

/// `(preset, genus, markings, d0, dinf, hours, caps)`; caps `None` are the
/// natural ones, otherwise `[vertices, edges, degree numerator, genus, web edges]`.
pub type Config = (&'static str, u32, &'static [&'static str], (i64, i64), (i64, i64), u32, Option<[usize; 5]>);

pub const REGULAR_CONFIGS: &[Config] = &[
    ("11112", 0, &[], (0, 1), (0, 1), 1, None),
    ("11112", 0, &[], (0, 1), (1, 3), 1, None),
    ("11112", 0, &[], (0, 1), (1, 3), 2, None),
    ("11112", 0, &[], (0, 1), (1, 3), 3, None),
    ("11112", 0, &[], (0, 1), (2, 3), 1, None),
    ("11112", 0, &[], (0, 1), (2, 3), 2, None),
    ("11112", 0, &[], (0, 1), (2, 3), 3, None),
    ("11112", 0, &[], (0, 1), (1, 1), 1, None),
    ("11112", 0, &[], (0, 1), (1, 1), 2, None),
    ("11112", 1, &[], (0, 1), (0, 1), 2, None),
    ("11112", 1, &[], (0, 1), (1, 3), 2, None),
    ("11112", 0, &[], (1, 6), (0, 1), 2, None),
    ("11112", 0, &[], (1, 1), (0, 1), 1, None),
    ("11112", 0, &[], (2, 1), (0, 1), 1, None),
    ("11112", 0, &[], (1, 1), (1, 3), 1, None),
    ("11112", 0, &["rho"], (1, 1), (0, 1), 1, None),
    ("11112", 0, &[], (1, 1), (0, 1), 2, Some([3, 3, 6, 1, 1])),
    ("11112", 1, &[], (1, 1), (0, 1), 2, Some([3, 3, 6, 1, 1])),
    ("11112", 0, &["rho"], (1, 1), (0, 1), 2, Some([3, 2, 6, 0, 1])),
    ("11112", 0, &[], (2, 1), (0, 1), 3, Some([3, 2, 12, 0, 0])),
    ("11114", 0, &[], (0, 1), (1, 2), 2, None),
    ("11114", 0, &[], (0, 1), (1, 4), 3, None),
    ("11114", 0, &[], (1, 1), (0, 1), 2, Some([3, 2, 8, 0, 0])),
    ("11125", 0, &[], (0, 1), (2, 5), 2, None),
    ("11125", 0, &[], (0, 1), (1, 5), 3, None),
    ("11125", 0, &[], (1, 1), (0, 1), 2, Some([3, 2, 10, 0, 0])),
];

pub fn caps_for(ws: &WeightSystem, dd: &DiscreteData, caps: Option<[usize; 5]>) -> EnumerationCaps {
    match caps {
        None => EnumerationCaps::natural(ws, dd),
        Some([v, e, c, g, w]) => EnumerationCaps {
            max_vertices: v,
            max_edges: e,
            max_edge_degree_numerator: c as u32,
            max_vertex_genus: g as u32,
            max_web_edges: w,
        },
    }
}

fn enumerate_config(c: &Config) -> (WeightSystem, DiscreteData, Vec<DecoratedGraph>, Vec<DecoratedGraph>) {
    let (p, g, mk, d0, dinf, n, caps) = *c;
    let ws = preset(p);
    let dd = data(&ws, g, mk, d0, dinf, n);
    let r = enumerate_flat_regular(&ws, &dd, &caps_for(&ws, &dd, caps)).unwrap();
    (ws, dd, r.graphs, r.pure_loops)
}

/// Regular graphs of every configuration in [`REGULAR_CONFIGS`].
pub fn regular_corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for c in REGULAR_CONFIGS {
        let (ws, dd, graphs, _) = enumerate_config(c);
        out.extend(graphs.into_iter().map(|graph| Case { ws: ws.clone(), dd: dd.clone(), graph }));
    }
    out
}

pub fn pure_loop_corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for c in REGULAR_CONFIGS {
        let (ws, dd, _, loops) = enumerate_config(c);
        out.extend(loops.into_iter().map(|graph| Case { ws: ws.clone(), dd: dd.clone(), graph }));
    }
    out
}

fn vertex(level: Level, hour: Option<u32>, genus: u32) -> Vertex {
    Vertex::new(level, hour, genus)
}

fn leg(index: usize, marking: Marking) -> Leg {
    Leg { index, marking }
}

/// Sector at the infinity end of an E1Inf edge of infinity degree `j / k`.
fn inf_sector(ws: &WeightSystem, j: i64) -> u32 {
    sector_of(&q(-j, ws.k() as i64), ws.k()).unwrap()
}

/// Graphs with balanced level-1 nodes: a level-0 vertex joined through a
/// contracted level-1 node to a marked or stable point at infinity, alone
/// or attached to enumerated graphs.
pub fn balanced_corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for p in ["11112", "11114", "11125"] {
        let ws = preset(p);
        let k = ws.k() as i64;
        for hours in 1..=2u32 {
            for alpha in 1..=hours {
                for j in 1..2 * k {
                    let b = inf_sector(&ws, j);
                    if b == ws.k() || !ws.is_narrow_sector(b) {
                        continue;
                    }
                    for (c, gw) in [(0, 0), (1, 0), (2, 0), (0, 1), (3, 1)] {
                        let mut w = vertex(Level::Zero, None, gw);
                        w.d0 = q(c, k);
                        let y = vertex(Level::Inf, Some(alpha), 0).with_legs([leg(0, Marking::Narrow(b))]);
                        let g = DecoratedGraph::new(
                            vec![w, vertex(Level::One, Some(alpha), 0), y],
                            vec![
                                Edge::new(EdgeType::E01, 0, 1, q(j, k), qi(0)),
                                Edge::new(EdgeType::E1Inf, 1, 2, qi(0), q(j, k)),
                            ],
                        );
                        out.push(Case { dd: data_for(&ws, &g, hours), ws: ws.clone(), graph: g });
                    }
                    // Two balanced branches at one level-0 vertex.
                    if j <= k {
                        let mut w = vertex(Level::Zero, None, 0);
                        w.d0 = q(1, k);
                        let y0 = vertex(Level::Inf, Some(alpha), 0).with_legs([leg(0, Marking::Narrow(b))]);
                        let y1 = vertex(Level::Inf, Some(hours), 0).with_legs([leg(1, Marking::Narrow(b))]);
                        let g = DecoratedGraph::new(
                            vec![w, vertex(Level::One, Some(alpha), 0), y0, vertex(Level::One, Some(hours), 0), y1],
                            vec![
                                Edge::new(EdgeType::E01, 0, 1, q(j, k), qi(0)),
                                Edge::new(EdgeType::E1Inf, 1, 2, qi(0), q(j, k)),
                                Edge::new(EdgeType::E01, 0, 3, q(j, k), qi(0)),
                                Edge::new(EdgeType::E1Inf, 3, 4, qi(0), q(j, k)),
                            ],
                        );
                        out.push(Case { dd: data_for(&ws, &g, hours), ws: ws.clone(), graph: g });
                    }
                }
            }
        }
    }
    // A balanced branch into a stable infinity vertex of an enumerated graph.
    for case in regular_corpus() {
        let g = &case.graph;
        let k = case.ws.k() as i64;
        for x in 0..g.vertices.len() {
            if g.vertices[x].level != Level::Inf || !g.is_stable(x) {
                continue;
            }
            let alpha = g.vertices[x].hour.unwrap();
            let mut h = g.clone();
            let w = h.vertices.len();
            let mut wv = vertex(Level::Zero, None, 0);
            wv.d0 = q(1, k);
            h.vertices.push(wv);
            h.vertices.push(vertex(Level::One, Some(alpha), 0));
            h.edges.push(Edge::new(EdgeType::E01, w, w + 1, q(1, k), qi(0)));
            h.edges.push(Edge::new(EdgeType::E1Inf, w + 1, x, qi(0), q(1, k)));
            h.vertices[x].dinf = forced_inf_degree(&h, x, case.ws.k());
            out.push(Case { dd: data_for(&case.ws, &h, case.dd.hours), ws: case.ws.clone(), graph: h });
        }
    }
    out
}

/// Flat graphs whose infinity part is not narrow: an E1Inf edge ending in a
/// broad or trivial sector, alone or at a stable infinity vertex.
pub fn broad_infinity_corpus() -> Vec<Case> {
    let mut out = Vec::new();
    for p in ["11112", "11114", "11125"] {
        let ws = preset(p);
        let k = ws.k() as i64;
        for j in 2..=2 * k {
            let b = inf_sector(&ws, j);
            if b != ws.k() && ws.is_narrow_sector(b) {
                continue;
            }
            for hours in [1u32, 2] {
                let g = DecoratedGraph::new(
                    vec![vertex(Level::One, Some(hours), 0), vertex(Level::Inf, Some(hours), 0)],
                    vec![Edge::new(EdgeType::E1Inf, 0, 1, qi(0), q(j, k))],
                );
                out.push(Case { dd: data_for(&ws, &g, hours), ws: ws.clone(), graph: g });
            }
            // Star: a stable genus-0 infinity vertex with three level-1 leaves.
            let mut x = vertex(Level::Inf, Some(1), 0);
            x.dinf = q(-1, k);
            let g = DecoratedGraph::new(
                vec![x, vertex(Level::One, Some(1), 0), vertex(Level::One, Some(1), 0), vertex(Level::One, Some(1), 0)],
                vec![
                    Edge::new(EdgeType::E1Inf, 1, 0, qi(0), q(1, k)),
                    Edge::new(EdgeType::E1Inf, 2, 0, qi(0), q(1, k)),
                    Edge::new(EdgeType::E1Inf, 3, 0, qi(0), q(j, k)),
                ],
            );
            out.push(Case { dd: data_for(&ws, &g, 1), ws: ws.clone(), graph: g });
        }
    }
    out
}

fn vertex_key(v: &Vertex) -> String {
    format!("{:?}|{:?}|{}|{}|{}|{:?}", v.level, v.hour, v.genus, v.d0, v.dinf, v.legs)
}

fn edge_key(e: &Edge) -> String {
    format!("{:?}|{}|{}", e.kind, e.d0, e.dinf)
}

/// Edge multiset of `g` after moving vertex `v` to `perm[v]`.
fn edge_multiset(g: &DecoratedGraph, perm: &[usize]) -> Vec<(usize, usize, String)> {
    let mut out: Vec<_> = g
        .edges
        .iter()
        .map(|e| {
            let (a, b) = (perm[e.ends.0], perm[e.ends.1]);
            (a.min(b), a.max(b), edge_key(e))
        })
        .collect();
    out.sort();
    out
}

fn maps_onto(a: &DecoratedGraph, b: &DecoratedGraph, perm: &[usize]) -> bool {
    (0..a.vertices.len()).all(|v| vertex_key(&a.vertices[v]) == vertex_key(&b.vertices[perm[v]]))
        && edge_multiset(a, perm) == edge_multiset(b, &(0..b.vertices.len()).collect::<Vec<_>>())
}

/// Isomorphism by exhaustive vertex permutation search.
pub fn brute_isomorphic(a: &DecoratedGraph, b: &DecoratedGraph) -> bool {
    let n = a.vertices.len();
    if n != b.vertices.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    (0..n).permutations(n).any(|perm| maps_onto(a, b, &perm))
}

/// Vertex permutations preserving every decoration, times the orderings of
/// identical parallel edges.
pub fn brute_automorphisms(g: &DecoratedGraph) -> u64 {
    let n = g.vertices.len();
    let vertex_maps = (0..n).permutations(n).filter(|perm| maps_onto(g, g, perm)).count() as u64;
    let mut groups: BTreeMap<(usize, usize, String), u64> = BTreeMap::new();
    for key in edge_multiset(g, &(0..n).collect::<Vec<_>>()) {
        *groups.entry(key).or_insert(0) += 1;
    }
    vertex_maps * groups.values().map(|&m| (1..=m).product::<u64>()).product::<u64>()
}

/// A random relabeling: vertices permuted, edges shuffled, edge ends swapped.
pub fn random_relabel(g: &DecoratedGraph, rng: &mut impl Rng) -> DecoratedGraph {
    let n = g.vertices.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut vertices = vec![g.vertices[0].clone(); n];
    for (v, &p) in perm.iter().enumerate() {
        vertices[p] = g.vertices[v].clone();
    }
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.ends = (perm[e.ends.0], perm[e.ends.1]);
            if rng.gen_bool(0.5) {
                e.ends = (e.ends.1, e.ends.0);
            }
            e
        })
        .collect();
    edges.shuffle(rng);
    DecoratedGraph::new(vertices, edges)
}

/// Replace every hour `α` by `sigma[α - 1]`.
pub fn permute_hours(g: &DecoratedGraph, sigma: &[u32]) -> DecoratedGraph {
    let mut out = g.clone();
    for v in &mut out.vertices {
        v.hour = v.hour.map(|h| sigma[h as usize - 1]);
    }
    out
}

/// `t_α -> t_{sigma[α - 1]}`.
pub fn hour_substitution(sigma: &[u32]) -> BTreeMap<Variable, RatFunc> {
    sigma
        .iter()
        .enumerate()
        .map(|(i, &s)| (Variable::t(i as u32 + 1), RatFunc::var(Variable::t(s))))
        .collect()
}

pub fn random_permutation(n: u32, rng: &mut impl Rng) -> Vec<u32> {
    let mut s: Vec<u32> = (1..=n).collect();
    s.shuffle(rng);
    s
}

pub fn rational(n: i64, d: i64) -> Q {
    q(n, d)
}
