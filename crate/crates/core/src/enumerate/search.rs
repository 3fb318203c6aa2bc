use std::collections::BTreeMap;

use itertools::Itertools;

use super::{insert_canonical, scaled_degrees, EnumerationCaps, Found, ShardKey, VertexType};
use crate::algebra::{q, Q};
use crate::graph::{classify, validate, DecoratedGraph, Edge, EdgeType, Leg, Level, Vertex};
use crate::model::{DiscreteData, Marking, WeightSystem};

struct Ctx<'a> {
    ws: &'a WeightSystem,
    dd: &'a DiscreteData,
    caps: &'a EnumerationCaps,
    k: i64,
    d0n: i64,
    dinfn: i64,
    /// `Dinf + l + 2g`: the E1Inf allowance before web edges are counted.
    slack: i64,
}

impl<'a> Ctx<'a> {
    fn new(ws: &'a WeightSystem, dd: &'a DiscreteData, caps: &'a EnumerationCaps) -> Self {
        let (d0n, dinfn) = scaled_degrees(ws, dd);
        Ctx {
            ws,
            dd,
            caps,
            k: ws.k() as i64,
            d0n,
            dinfn,
            slack: dinfn + dd.markings.len() as i64 + 2 * dd.genus as i64,
        }
    }

    fn q(&self, num: i64) -> Q {
        q(num, self.k)
    }

    fn web_budget(&self, level_edges: i64) -> i64 {
        if self.dd.hours < 2 {
            return 0;
        }
        (self.d0n - self.k * level_edges).min(self.caps.max_web_edges as i64).max(0)
    }

    /// Largest edge count compatible with the degree budgets when `n0`
    /// level-0 vertices each need their own E01 edge.
    fn max_edges(&self, n0: i64) -> i64 {
        let a_max = self.d0n.div_euclid(self.k);
        (n0..=a_max)
            .map(|a| {
                let b = self.web_budget(a);
                a + b + (self.slack + b).max(0)
            })
            .max()
            .unwrap_or(-1)
    }

    fn allowed_at_stable_inf(&self, b: u32) -> bool {
        b == 1 || (b == 2 && self.ws.is_narrow_sector(2))
    }

    fn sector(&self, z: i64) -> u32 {
        let b = (-z).rem_euclid(self.k);
        if b == 0 {
            self.k as u32
        } else {
            b as u32
        }
    }
}

fn level_types(level: Level, hours: u32, gmax: u32) -> Vec<VertexType> {
    let hs: Vec<Option<u32>> = if level == Level::Zero { vec![None] } else { (1..=hours).map(Some).collect() };
    hs.into_iter()
        .flat_map(|hour| (0..=gmax).map(move |genus| VertexType { level, hour, genus }))
        .collect()
}

fn multisets(types: &[VertexType], n: usize) -> Vec<Vec<VertexType>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    types.iter().copied().combinations_with_replacement(n).collect()
}

pub(super) fn shards(ws: &WeightSystem, dd: &DiscreteData, caps: &EnumerationCaps) -> Vec<ShardKey> {
    let ctx = Ctx::new(ws, dd, caps);
    let gmax = caps.max_vertex_genus.min(dd.genus);
    let t0 = level_types(Level::Zero, dd.hours, gmax);
    let t1 = level_types(Level::One, dd.hours, gmax);
    let ti = level_types(Level::Inf, dd.hours, gmax);
    let mut out = Vec::new();
    for n in 1..=caps.max_vertices {
        for n0 in 0..=n {
            let need = if n > 1 { n0 as i64 } else { 0 };
            if ctx.k * need > ctx.d0n {
                continue;
            }
            let emax = ctx.max_edges(need).min(caps.max_edges as i64);
            if (n as i64) - 1 > emax {
                continue;
            }
            for n1 in 0..=(n - n0) {
                let ni = n - n0 - n1;
                for a in multisets(&t0, n0) {
                    for b in multisets(&t1, n1) {
                        for c in multisets(&ti, ni) {
                            let genus: u32 = a.iter().chain(&b).chain(&c).map(|t| t.genus).sum();
                            if genus > dd.genus {
                                continue;
                            }
                            let e = (n as i64) - 1 + (dd.genus - genus) as i64;
                            if e > emax {
                                continue;
                            }
                            out.push(a.iter().chain(&b).chain(&c).copied().collect());
                        }
                    }
                }
            }
        }
    }
    out
}

fn edge_kind(a: &VertexType, b: &VertexType) -> Option<EdgeType> {
    let kind = EdgeType::between(a.level, b.level)?;
    let ok = match kind {
        EdgeType::E01 => true,
        EdgeType::E11 | EdgeType::EInfInf => a.hour != b.hour,
        EdgeType::E1Inf => a.hour == b.hour,
        EdgeType::E0Inf => false,
    };
    ok.then_some(kind)
}

struct ShardSearch<'a> {
    ctx: &'a Ctx<'a>,
    types: &'a [VertexType],
    pairs: Vec<(usize, usize, EdgeType)>,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    level_edges: i64,
    e1inf: i64,
    web: i64,
}

pub(super) fn search_shard(ws: &WeightSystem, dd: &DiscreteData, caps: &EnumerationCaps, shard: &ShardKey) -> Found {
    let ctx = Ctx::new(ws, dd, caps);
    let n = shard.len();
    let genus: u32 = shard.iter().map(|t| t.genus).sum();
    let e_total = n - 1 + (dd.genus - genus) as usize;
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(kind) = edge_kind(&shard[i], &shard[j]) {
                pairs.push((i, j, kind));
            }
        }
    }
    let s = ShardSearch { ctx: &ctx, types: shard, pairs };
    let mut found = Found { regular: BTreeMap::new(), loops: BTreeMap::new() };
    let mut counts = vec![0usize; s.pairs.len()];
    s.assign(0, e_total, &mut counts, Tally::default(), &mut found);
    found
}

impl ShardSearch<'_> {
    fn budget_ok(&self, t: Tally) -> bool {
        let c = self.ctx;
        c.k * t.level_edges + t.web <= c.d0n
            && t.web <= c.caps.max_web_edges as i64
            && t.e1inf <= (c.slack + c.web_budget(t.level_edges)).max(0)
    }

    fn assign(&self, idx: usize, remaining: usize, counts: &mut Vec<usize>, t: Tally, out: &mut Found) {
        if idx == self.pairs.len() {
            if remaining == 0 {
                self.with_edges(counts, out);
            }
            return;
        }
        let kind = self.pairs[idx].2;
        for m in 0..=remaining {
            let mut t2 = t;
            let mi = m as i64;
            match kind {
                EdgeType::E01 | EdgeType::E11 => t2.level_edges += mi,
                EdgeType::E1Inf => t2.e1inf += mi,
                EdgeType::EInfInf => t2.web += mi,
                EdgeType::E0Inf => unreachable!(),
            }
            if !self.budget_ok(t2) {
                break;
            }
            counts[idx] = m;
            self.assign(idx + 1, remaining - m, counts, t2, out);
        }
        counts[idx] = 0;
    }

    fn with_edges(&self, counts: &[usize], out: &mut Found) {
        let mut edges = Vec::new();
        for (&(a, b, kind), &m) in self.pairs.iter().zip(counts) {
            for _ in 0..m {
                edges.push(Edge::new(kind, a, b, Q::default(), Q::default()));
            }
        }
        let vertices: Vec<Vertex> = self
            .types
            .iter()
            .map(|t| Vertex::new(t.level, t.hour, t.genus))
            .collect();
        let skeleton = DecoratedGraph::new(vertices, edges);
        if skeleton.components() != 1 {
            return;
        }
        let markings = &self.ctx.dd.markings;
        let choices: Vec<Vec<usize>> = markings
            .iter()
            .map(|m| {
                (0..self.types.len())
                    .filter(|&v| match m {
                        Marking::RhoUnit => self.types[v].level != Level::Inf,
                        Marking::Narrow(_) => self.types[v].level != Level::One,
                    })
                    .collect()
            })
            .collect();
        if choices.is_empty() {
            self.with_legs(&skeleton, &[], out);
        } else {
            for placement in choices.into_iter().multi_cartesian_product() {
                self.with_legs(&skeleton, &placement, out);
            }
        }
    }

    fn with_legs(&self, skeleton: &DecoratedGraph, placement: &[usize], out: &mut Found) {
        let c = self.ctx;
        let mut g = skeleton.clone();
        for (index, &v) in placement.iter().enumerate() {
            g.vertices[v].legs.push(Leg { index, marking: c.dd.markings[index] });
        }
        let n = g.vertices.len();
        let lone = n == 1 && g.edges.is_empty();
        // minimum level-0 degree numerator per vertex; None if not level 0
        let mut y_min: Vec<Option<i64>> = vec![None; n];
        let mut forced_inf = 0i64;
        for v in 0..n {
            let vx = &g.vertices[v];
            let euler = g.euler_char(v);
            let shape_ok = vx.genus == 0
                && matches!((vx.legs.len(), g.valence(v)), (0, 1) | (1, 1) | (0, 2));
            match vx.level {
                Level::Zero => {
                    y_min[v] = Some(if euler > 0 || lone || shape_ok { 0 } else { 1 });
                }
                Level::One => {
                    if euler <= 0 && !shape_ok {
                        return;
                    }
                }
                Level::Inf => {
                    if euler > 0 {
                        let regular_legs = vx.legs.iter().all(|l| match l.marking {
                            Marking::Narrow(m) => c.allowed_at_stable_inf(m),
                            Marking::RhoUnit => false,
                        });
                        if !regular_legs {
                            return;
                        }
                        forced_inf += euler;
                    } else if !shape_ok {
                        return;
                    }
                }
            }
        }
        let is_v01 = |v: usize| g.vertices[v].genus == 0 && g.vertices[v].legs.is_empty() && g.valence(v) == 1
            && g.euler_char(v) < 0;
        // level-0 degree parts: (edge or vertex, min, step)
        #[derive(Clone, Copy)]
        enum Part {
            Edge(usize),
            Vertex(usize),
        }
        let mut parts: Vec<(Part, i64, i64)> = Vec::new();
        let mut web_dl = vec![0i64; g.edges.len()];
        for (i, e) in g.edges.iter().enumerate() {
            match e.kind {
                EdgeType::E01 | EdgeType::E11 => parts.push((Part::Edge(i), c.k, c.k)),
                EdgeType::EInfInf => {
                    let special = [e.ends.0, e.ends.1].iter().filter(|&&v| !is_v01(v)).count() as i64;
                    web_dl[i] = special - 2;
                    if web_dl[i].unsigned_abs() > c.caps.max_edge_degree_numerator as u64 {
                        return;
                    }
                    parts.push((Part::Edge(i), 1, 1));
                }
                _ => {}
            }
        }
        for (v, m) in y_min.iter().enumerate() {
            if let Some(m) = m {
                parts.push((Part::Vertex(v), *m, 1));
            }
        }
        let options: Vec<Vec<i64>> = parts
            .iter()
            .map(|&(p, min, step)| {
                let cap = match p {
                    Part::Edge(i) if g.edges[i].kind != EdgeType::EInfInf => c.caps.max_edge_degree_numerator as i64,
                    _ => i64::MAX,
                };
                (0..)
                    .map(|j| min + j * step)
                    .take_while(|&x| x <= c.d0n && x <= cap)
                    .collect()
            })
            .collect();
        let e1inf: Vec<usize> = (0..g.edges.len()).filter(|&i| g.edges[i].kind == EdgeType::E1Inf).collect();
        compositions(c.d0n, &options, &mut |vals| {
            let mut x = vec![0i64; g.edges.len()];
            let mut y = vec![0i64; n];
            for (&(p, _, _), &val) in parts.iter().zip(vals) {
                match p {
                    Part::Edge(i) => x[i] = val,
                    Part::Vertex(v) => y[v] = val,
                }
            }
            let web_inf: i64 = (0..g.edges.len())
                .filter(|&i| g.edges[i].kind == EdgeType::EInfInf)
                .map(|i| x[i] - web_dl[i])
                .sum();
            let rest = c.dinfn - web_inf + forced_inf;
            let z_options: Vec<Vec<i64>> = e1inf
                .iter()
                .map(|&i| self.e1inf_options(&g, i, &x, rest))
                .collect();
            compositions(rest, &z_options, &mut |zs| {
                let mut h = g.clone();
                for v in 0..n {
                    if h.vertices[v].level == Level::Zero {
                        h.vertices[v].d0 = c.q(y[v]);
                    } else if h.vertices[v].level == Level::Inf && h.euler_char(v) > 0 {
                        h.vertices[v].dinf = c.q(-h.euler_char(v));
                    }
                }
                for i in 0..h.edges.len() {
                    match h.edges[i].kind {
                        EdgeType::E01 | EdgeType::E11 => h.edges[i].d0 = c.q(x[i]),
                        EdgeType::EInfInf => {
                            h.edges[i].d0 = c.q(x[i]);
                            h.edges[i].dinf = c.q(x[i] - web_dl[i]);
                        }
                        _ => {}
                    }
                }
                for (&i, &z) in e1inf.iter().zip(zs) {
                    h.edges[i].dinf = c.q(z);
                }
                for v in &mut h.vertices {
                    v.legs.sort();
                }
                if !validate(&h, c.ws, c.dd).is_valid() {
                    debug_assert!(false, "search produced an invalid graph: {}", validate(&h, c.ws, c.dd));
                    return;
                }
                if let Ok(class) = classify(&h, c.ws) {
                    insert_canonical(out, h, class);
                }
            });
        });
    }

    /// Admissible `k * dinf` values for the E1Inf edge `i`.
    fn e1inf_options(&self, g: &DecoratedGraph, i: usize, x: &[i64], rest: i64) -> Vec<i64> {
        let c = self.ctx;
        let e = &g.edges[i];
        let (v1, vi) = if g.vertices[e.ends.0].level == Level::One { e.ends } else { (e.ends.1, e.ends.0) };
        let inf_stable = g.euler_char(vi) > 0;
        let inf_v01 = !inf_stable && g.vertices[vi].legs.is_empty() && g.valence(vi) == 1;
        let inf_leg = if inf_stable { None } else { g.vertices[vi].legs.first().map(|l| l.marking) };
        // a level-1 node between this edge and an E01 edge balances at equal degree
        let partner = if g.euler_char(v1) == 0 && g.vertices[v1].legs.is_empty() && g.vertices[v1].genus == 0 {
            g.edges_at(v1)
                .find(|&j| j != i && g.edges[j].kind == EdgeType::E01)
                .map(|j| x[j])
        } else {
            None
        };
        let cap = c.caps.max_edge_degree_numerator as i64;
        (1..=rest.min(cap))
            .filter(|&z| {
                let b = c.sector(z);
                let sector_ok = if inf_stable {
                    c.allowed_at_stable_inf(b)
                } else {
                    b != c.k as u32
                        && c.ws.is_narrow_sector(b)
                        && match inf_leg {
                            Some(Marking::Narrow(m)) => m == b,
                            Some(Marking::RhoUnit) => false,
                            None => !(inf_v01 && z == 1),
                        }
                };
                let balanced = !inf_v01 && partner == Some(z);
                sector_ok && !balanced
            })
            .collect()
    }
}

/// Call `f` with every choice of one value per option list summing to
/// `total`.
fn compositions(total: i64, options: &[Vec<i64>], f: &mut dyn FnMut(&[i64])) {
    let mut suffix_min = vec![0i64; options.len() + 1];
    for i in (0..options.len()).rev() {
        let m = options[i].first().copied().unwrap_or(i64::MAX / 4);
        suffix_min[i] = suffix_min[i + 1].saturating_add(m);
    }
    let mut chosen = Vec::with_capacity(options.len());
    fn go(
        i: usize,
        left: i64,
        options: &[Vec<i64>],
        suffix_min: &[i64],
        chosen: &mut Vec<i64>,
        f: &mut dyn FnMut(&[i64]),
    ) {
        if i == options.len() {
            if left == 0 {
                f(chosen);
            }
            return;
        }
        for &v in &options[i] {
            if v + suffix_min[i + 1] > left {
                break;
            }
            if i + 1 == options.len() && v != left {
                continue;
            }
            chosen.push(v);
            go(i + 1, left - v, options, suffix_min, chosen, f);
            chosen.pop();
        }
    }
    go(0, total, options, &suffix_min, &mut chosen, f);
}
