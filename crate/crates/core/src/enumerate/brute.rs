//! Exhaustive reference enumerator over labeled graphs.

use itertools::Itertools;

use super::{scaled_degrees, EnumError, EnumerationCaps};
use crate::algebra::{q, Q};
use crate::graph::canon::brute::isomorphic;
use crate::graph::flatten::is_flat;
use crate::graph::{classify, flag_monodromy, validate, DecoratedGraph, Edge, EdgeType, GraphClass, Leg, Level, Vertex};
use crate::model::{DiscreteData, WeightSystem};

pub const BRUTE_FORCE_LIMIT: usize = 5;

/// Every labeled graph within `caps`, filtered by validity, flatness and
/// regularity, deduplicated by pairwise permutation search.
pub fn brute_force_enumerate(
    ws: &WeightSystem,
    dd: &DiscreteData,
    caps: &EnumerationCaps,
) -> Result<Vec<DecoratedGraph>, EnumError> {
    if caps.max_vertices > BRUTE_FORCE_LIMIT || caps.max_edges > BRUTE_FORCE_LIMIT {
        return Err(EnumError::CapTooLarge(BRUTE_FORCE_LIMIT));
    }
    dd.validate(ws)?;
    let k = ws.k() as i64;
    let (d0n, _) = scaled_degrees(ws, dd);
    if d0n < 0 {
        return Ok(Vec::new());
    }
    let cap = caps.max_edge_degree_numerator as i64;
    let gmax = caps.max_vertex_genus.min(dd.genus);
    let mut decorations = Vec::new();
    for level in [Level::Zero, Level::One, Level::Inf] {
        for genus in 0..=gmax {
            if level == Level::Zero {
                decorations.push((level, None, genus));
            } else {
                for h in 1..=dd.hours {
                    decorations.push((level, Some(h), genus));
                }
            }
        }
    }
    let mut kept: Vec<DecoratedGraph> = Vec::new();
    for n in 1..=caps.max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
        for decs in (0..n).map(|_| decorations.iter()).multi_cartesian_product() {
            for m in 0..=caps.max_edges {
                for chosen in pairs.iter().combinations_with_replacement(m) {
                    let mut edges = Vec::new();
                    let mut ok = true;
                    for &&(a, b) in &chosen {
                        match EdgeType::between(decs[a].0, decs[b].0) {
                            Some(kind) => edges.push(Edge::new(kind, a, b, Q::default(), Q::default())),
                            None => ok = false,
                        }
                    }
                    if !ok || edges.iter().filter(|e| e.kind == EdgeType::EInfInf).count() > caps.max_web_edges {
                        continue;
                    }
                    let vertices: Vec<Vertex> = decs.iter().map(|&&(l, h, g)| Vertex::new(l, h, g)).collect();
                    let skeleton = DecoratedGraph::new(vertices, edges);
                    if skeleton.components() != 1 || skeleton.total_genus() != dd.genus as i64 {
                        continue;
                    }
                    for placement in (0..dd.markings.len()).map(|_| 0..n).multi_cartesian_product() {
                        let mut g = skeleton.clone();
                        for (index, &v) in placement.iter().enumerate() {
                            g.vertices[v].legs.push(Leg { index, marking: dd.markings[index] });
                        }
                        assign_degrees(ws, dd, &g, k, d0n, cap, &mut |h| {
                            if accept(ws, h) && !kept.iter().any(|o| isomorphic(o, h)) {
                                kept.push(h.clone());
                            }
                        });
                    }
                }
            }
        }
    }
    Ok(kept)
}

fn accept(ws: &WeightSystem, g: &DecoratedGraph) -> bool {
    let k = ws.k();
    for (i, e) in g.edges.iter().enumerate() {
        if e.kind == EdgeType::E01 {
            let v0 = if g.vertices[e.ends.0].level == Level::Zero { e.ends.0 } else { e.ends.1 };
            match flag_monodromy(g, i, v0, k) {
                Ok(m) if !m.degeneracy_empty => {}
                _ => return false,
            }
        }
    }
    is_flat(g) && classify(g, ws) == Ok(GraphClass::Regular)
}

/// Enumerate edge and vertex degrees; the last vertex takes the remainder.
fn assign_degrees(
    ws: &WeightSystem,
    dd: &DiscreteData,
    g: &DecoratedGraph,
    k: i64,
    d0n: i64,
    cap: i64,
    f: &mut dyn FnMut(&DecoratedGraph),
) {
    let edge_opts: Vec<Vec<(i64, i64)>> = g
        .edges
        .iter()
        .map(|e| {
            let pos = 1..=d0n;
            let mut v: Vec<(i64, i64)> = match e.kind {
                EdgeType::E01 | EdgeType::E11 => pos.map(|a| (a, 0)).collect(),
                EdgeType::E1Inf => (1..=cap).map(|b| (0, b)).collect(),
                EdgeType::E0Inf => pos.flat_map(|a| (1..=cap).map(move |b| (a, b))).collect(),
                EdgeType::EInfInf => pos.flat_map(|a| (a - cap..=a + cap).map(move |b| (a, b))).collect(),
            };
            v.retain(|&(a, b)| (a - b).abs() <= cap);
            v
        })
        .collect();
    let n = g.vertices.len();
    let depth = 2 * dd.genus as i64 + dd.markings.len() as i64 + 2 * g.edges.len() as i64;
    let vert_opts: Vec<Vec<(i64, i64)>> = g
        .vertices
        .iter()
        .map(|v| match v.level {
            Level::Zero => (0..=d0n).map(|a| (a, 0)).collect(),
            Level::One => vec![(0, 0)],
            Level::Inf => (-depth..=0).map(|b| (0, b)).collect(),
        })
        .collect();
    let mut slots: Vec<&Vec<(i64, i64)>> = edge_opts.iter().collect();
    slots.extend(vert_opts[..n - 1].iter());
    let last = &vert_opts[n - 1];
    let (dd0, ddinf) = scaled_degrees(ws, dd);
    // reachable (d0, dinf) ranges of each suffix of slots, last vertex included
    let range = |o: &Vec<(i64, i64)>| {
        if o.is_empty() {
            return [1, 0, 1, 0];
        }
        let (a0, a1) = o.iter().fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
        let (b0, b1) = o.iter().fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
        [a0, a1, b0, b1]
    };
    let mut suffix = vec![range(last); slots.len() + 1];
    for i in (0..slots.len()).rev() {
        let r = range(slots[i]);
        let s = suffix[i + 1];
        suffix[i] = [s[0] + r[0], s[1] + r[1], s[2] + r[2], s[3] + r[3]];
    }
    let ne = g.edges.len();
    let mut chosen: Vec<(i64, i64)> = Vec::with_capacity(slots.len());
    let walk = Walk { slots: &slots, suffix: &suffix, last, target: (dd0, ddinf) };
    walk.go(0, (0, 0), &mut chosen, &mut |vals, rest| {
        let mut h = g.clone();
        for (i, &(a, b)) in vals.iter().enumerate() {
            if i < ne {
                h.edges[i].d0 = q(a, k);
                h.edges[i].dinf = q(b, k);
            } else {
                h.vertices[i - ne].d0 = q(a, k);
                h.vertices[i - ne].dinf = q(b, k);
            }
        }
        h.vertices[n - 1].d0 = q(rest.0, k);
        h.vertices[n - 1].dinf = q(rest.1, k);
        for v in &mut h.vertices {
            v.legs.sort();
        }
        if validate(&h, ws, dd).is_valid() {
            f(&h);
        }
    });
}

struct Walk<'a> {
    slots: &'a [&'a Vec<(i64, i64)>],
    suffix: &'a [[i64; 4]],
    last: &'a [(i64, i64)],
    target: (i64, i64),
}

impl Walk<'_> {
    fn go(
        &self,
        i: usize,
        used: (i64, i64),
        chosen: &mut Vec<(i64, i64)>,
        done: &mut dyn FnMut(&[(i64, i64)], (i64, i64)),
    ) {
        let (r0, r1) = (self.target.0 - used.0, self.target.1 - used.1);
        let s = self.suffix[i];
        if r0 < s[0] || r0 > s[1] || r1 < s[2] || r1 > s[3] {
            return;
        }
        if i == self.slots.len() {
            if self.last.contains(&(r0, r1)) {
                done(chosen, (r0, r1));
            }
            return;
        }
        for &(a, b) in self.slots[i] {
            chosen.push((a, b));
            self.go(i + 1, (used.0 + a, used.1 + b), chosen, done);
            chosen.pop();
        }
    }
}

