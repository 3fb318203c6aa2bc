//! Canonical labeling by colour refinement and individualization.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use super::{DecoratedGraph, Edge, Level, Vertex, VertexId};

/// Byte string identifying the isomorphism class of a decorated graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub Vec<u8>);

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

fn vertex_label(v: &Vertex) -> String {
    let legs = v.legs.iter().map(|l| format!("{}:{}", l.index, l.marking)).join(",");
    let hour = v.hour.map(|h| h.to_string()).unwrap_or_default();
    format!("{}|{}|{}|{}|{}|{}", v.level, hour, v.genus, v.d0, v.dinf, legs)
}

fn edge_label(e: &Edge) -> String {
    format!("{}|{}|{}", e.kind, e.d0, e.dinf)
}

/// Edge endpoints ordered by level, then by position when levels agree.
fn oriented(g: &DecoratedGraph, e: &Edge, pos: &[usize]) -> (usize, usize) {
    let (a, b) = e.ends;
    let (la, lb): (Level, Level) = (g.vertices[a].level, g.vertices[b].level);
    if la < lb || (la == lb && pos[a] <= pos[b]) {
        (pos[a], pos[b])
    } else {
        (pos[b], pos[a])
    }
}

type Encoding = (Vec<String>, Vec<(usize, usize, String)>);

/// `pos[v]` is the new index of vertex `v`.
fn encode(g: &DecoratedGraph, vlabels: &[String], elabels: &[String], pos: &[usize]) -> Encoding {
    let mut verts = vec![String::new(); pos.len()];
    for (v, &p) in pos.iter().enumerate() {
        verts[p] = vlabels[v].clone();
    }
    let mut edges: Vec<_> = g
        .edges
        .iter()
        .zip(elabels)
        .map(|(e, l)| {
            let (x, y) = oriented(g, e, pos);
            (x, y, l.clone())
        })
        .collect();
    edges.sort();
    (verts, edges)
}

fn to_bytes(enc: &Encoding) -> CanonicalForm {
    let mut s = String::new();
    for v in &enc.0 {
        s.push('[');
        s.push_str(v);
        s.push(']');
    }
    s.push('#');
    for (x, y, l) in &enc.1 {
        s.push_str(&format!("({x},{y},{l})"));
    }
    CanonicalForm(s.into_bytes())
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let sorted: Vec<T> = keys.iter().cloned().sorted().dedup().collect();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

struct Refiner {
    vlabels: Vec<String>,
    elabels: Vec<String>,
    adj: Vec<Vec<(usize, VertexId)>>,
}

impl Refiner {
    fn new(g: &DecoratedGraph) -> Self {
        let vlabels: Vec<String> = g.vertices.iter().map(vertex_label).collect();
        let elabels: Vec<String> = g.edges.iter().map(edge_label).collect();
        let mut adj = vec![Vec::new(); g.vertices.len()];
        for (i, e) in g.edges.iter().enumerate() {
            adj[e.ends.0].push((i, e.ends.1));
            adj[e.ends.1].push((i, e.ends.0));
        }
        Refiner { vlabels, elabels, adj }
    }

    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut count = colors.iter().unique().count();
        loop {
            let sigs: Vec<(usize, Vec<(&str, usize)>)> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<(&str, usize)> =
                        self.adj[v].iter().map(|&(e, u)| (self.elabels[e].as_str(), colors[u])).collect();
                    nb.sort();
                    (colors[v], nb)
                })
                .collect();
            colors = rank(&sigs);
            let c = colors.iter().unique().count();
            if c == count {
                return colors;
            }
            count = c;
        }
    }

    /// Visit every leaf of the individualization tree.
    fn search(&self, colors: Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        let n = colors.len();
        let mut sizes = vec![0usize; n];
        for &c in &colors {
            sizes[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| sizes[c] > 1) else {
            visit(&colors);
            return;
        };
        for v in (0..n).filter(|&v| colors[v] == cell) {
            let keys: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
            self.search(self.refine(rank(&keys)), visit);
        }
    }

    fn initial(&self) -> Vec<usize> {
        self.refine(rank(&self.vlabels))
    }
}

fn parallel_factor(g: &DecoratedGraph) -> u64 {
    let mut groups: BTreeMap<(usize, usize, String), u64> = BTreeMap::new();
    for e in &g.edges {
        let (a, b) = if e.ends.0 <= e.ends.1 { e.ends } else { (e.ends.1, e.ends.0) };
        *groups.entry((a, b, edge_label(e))).or_default() += 1;
    }
    groups.values().map(|&m| (1..=m).product::<u64>()).product()
}

/// Canonical form together with the number of vertex orderings attaining it.
fn canonical_search(g: &DecoratedGraph) -> (Encoding, Vec<usize>, u64) {
    let r = Refiner::new(g);
    let mut best: Option<(Encoding, Vec<usize>)> = None;
    let mut hits = 0u64;
    r.search(r.initial(), &mut |pos| {
        let enc = encode(g, &r.vlabels, &r.elabels, pos);
        match &best {
            Some((b, _)) if enc > *b => {}
            Some((b, _)) if enc == *b => hits += 1,
            _ => {
                best = Some((enc, pos.to_vec()));
                hits = 1;
            }
        }
    });
    let (enc, pos) = best.unwrap_or_default();
    (enc, pos, hits)
}

pub fn canonical_form(g: &DecoratedGraph) -> CanonicalForm {
    to_bytes(&canonical_search(g).0)
}

/// Vertex automorphisms times the permutations of identical parallel edges.
pub fn automorphism_order(g: &DecoratedGraph) -> u64 {
    canonical_search(g).2 * parallel_factor(g)
}

/// The graph relabeled into canonical vertex order with sorted edges.
pub fn canonicalize(g: &DecoratedGraph) -> DecoratedGraph {
    let (_, pos, _) = canonical_search(g);
    relabel(g, &pos)
}

pub fn relabel(g: &DecoratedGraph, pos: &[usize]) -> DecoratedGraph {
    let mut vertices = vec![None; pos.len()];
    for (v, &p) in pos.iter().enumerate() {
        vertices[p] = Some(g.vertices[v].clone());
    }
    let mut edges: Vec<Edge> = g
        .edges
        .iter()
        .map(|e| {
            let mut e2 = e.clone();
            e2.ends = oriented(g, e, pos);
            e2
        })
        .collect();
    edges.sort_by_key(|e| (e.ends, edge_label(e)));
    DecoratedGraph::new(vertices.into_iter().map(Option::unwrap).collect(), edges)
}

/// Exhaustive reference implementations over all vertex permutations.
pub mod brute {
    use super::*;

    fn all_encodings(g: &DecoratedGraph) -> impl Iterator<Item = Encoding> + '_ {
        let vl: Vec<String> = g.vertices.iter().map(vertex_label).collect();
        let el: Vec<String> = g.edges.iter().map(edge_label).collect();
        let n = g.vertices.len();
        (0..n).permutations(n).map(move |pos| encode(g, &vl, &el, &pos))
    }

    fn identity_encoding(g: &DecoratedGraph) -> Encoding {
        let vl: Vec<String> = g.vertices.iter().map(vertex_label).collect();
        let el: Vec<String> = g.edges.iter().map(edge_label).collect();
        let id: Vec<usize> = (0..g.vertices.len()).collect();
        encode(g, &vl, &el, &id)
    }

    pub fn canonical_form(g: &DecoratedGraph) -> CanonicalForm {
        to_bytes(&all_encodings(g).min().unwrap_or_default())
    }

    pub fn automorphism_order(g: &DecoratedGraph) -> u64 {
        let id = identity_encoding(g);
        all_encodings(g).filter(|e| *e == id).count() as u64 * parallel_factor(g)
    }

    pub fn isomorphic(a: &DecoratedGraph, b: &DecoratedGraph) -> bool {
        if a.vertices.len() != b.vertices.len() || a.edges.len() != b.edges.len() {
            return false;
        }
        let target = identity_encoding(b);
        all_encodings(a).any(|e| e == target)
    }
}
