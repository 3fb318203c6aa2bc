//! Checks shared by the unit-style integration tests and the acceptance
//! harness. Each audit panics on the first mismatch and otherwise returns a
//! short summary of what it covered.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::LazyLock;

use msploc::algebra::{q, qi, RatFunc, Variable, Q};
use msploc::enumerate::{brute_force_enumerate, enumerate_flat_regular};
use msploc::eval::{
    assemble_graph, e01_factor, e11_factor, e1inf_factor, edge_contribution, level_one_vertex_factor,
    node_contribution, tangent_weight, vertex_contribution, DeltaFlags, E01Range, E11Form, EvalContext, EvalError,
    EvalOptions,
};
use msploc::graph::flatten::{balanced_vertices, is_flat};
use msploc::graph::{
    automorphism_order, canonical_form, classify, flatten, validate, CanonicalForm, DecoratedGraph, EdgeType,
    GraphClass, Level, Unstable,
};
use msploc::io::{run_evaluate, RunConfig, RunOptions};
use msploc::model::{cosection_pairing, virtual_dimension, DiscreteData, Marking};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::closed_forms::{self, Point};
use super::*;

pub const PRESETS: [&str; 3] = ["11112", "11114", "11125"];

pub static REGULAR: LazyLock<Vec<Case>> = LazyLock::new(regular_corpus);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ctx(case: &Case) -> EvalContext {
    EvalContext::new(case.ws.clone(), case.dd.hours)
}

fn random_q(r: &mut impl Rng) -> Q {
    q(r.gen_range(-30..=30), r.gen_range(1..=9))
}

/// Virtual dimension against `N d0 + N(1-g) + d_inf + l - 4 sum m_i / k`,
/// evaluated over the common denominator `k`.
pub fn audit_virtual_dimension(samples: usize) -> String {
    let mut r = rng(11);
    for _ in 0..samples {
        let ws = preset(PRESETS.choose(&mut r).unwrap());
        let k = ws.k() as i64;
        let narrow = ws.narrow_sectors();
        let (g, n) = (r.gen_range(0..=3i64), r.gen_range(1..=4i64));
        let (d0k, dinfk) = (r.gen_range(0..=3 * k), r.gen_range(0..=3 * k));
        let mk: Vec<Marking> = (0..r.gen_range(0..=4))
            .map(|_| if r.gen_bool(0.3) { Marking::RhoUnit } else { Marking::Narrow(*narrow.choose(&mut r).unwrap()) })
            .collect();
        let msum: i64 = mk.iter().map(|m| if let Marking::Narrow(m) = m { *m as i64 } else { 0 }).sum();
        let expect = Q::new((n * d0k + n * (1 - g) * k + dinfk + mk.len() as i64 * k - 4 * msum).into(), k.into());
        let dd = DiscreteData::new(&ws, g as u32, mk.clone(), q(d0k, k), q(dinfk, k), n as u32).unwrap();
        assert_eq!(virtual_dimension(&ws, &dd).unwrap(), expect, "{dd:?}");
    }
    format!("{samples} configurations")
}

/// The pairing vanishes along `phidot_i = a_i phi_i`, `rhodot = -k rho`.
pub fn audit_cosection(points_per_preset: usize) -> String {
    let mut r = rng(12);
    for p in PRESETS {
        let ws = preset(p);
        let a = ws.a();
        for _ in 0..points_per_preset {
            let phi: [Q; 5] = std::array::from_fn(|_| random_q(&mut r));
            let rho = random_q(&mut r);
            let phidot: [Q; 5] = std::array::from_fn(|i| qi(a[i] as i64) * &phi[i]);
            let rhodot = -(qi(ws.k() as i64) * &rho);
            assert_eq!(cosection_pairing(&ws, &phi, &rho, &phidot, &rhodot), Q::from_integer(0.into()));
        }
    }
    format!("{} points", 3 * points_per_preset)
}

pub fn audit_flatten() -> String {
    let corpus = balanced_corpus();
    assert!(corpus.len() >= 200, "{}", corpus.len());
    for c in &corpus {
        let report = validate(&c.graph, &c.ws, &c.dd);
        assert!(report.is_valid(), "{:?}: {report:?}", c.graph);
        let balanced = balanced_vertices(&c.graph);
        assert!(!balanced.is_empty());
        let f = flatten(&c.graph);
        assert!(is_flat(&f));
        assert_eq!(flatten(&f), f, "not idempotent");
        assert_eq!(f.total_degree(), c.graph.total_degree());
        assert_eq!(f.total_genus(), c.graph.total_genus());
        assert_eq!(f.legs(), c.graph.legs());
        assert_eq!(c.graph.vertices.len() - f.vertices.len(), balanced.len());
        assert_eq!(f.count_edges(EdgeType::E0Inf), c.graph.count_edges(EdgeType::E0Inf) + balanced.len());
        let report = validate(&f, &c.ws, &c.dd);
        assert!(report.is_valid(), "{report:?}");
    }
    format!("{} graphs with balanced nodes", corpus.len())
}

/// Every graph the tests know about, deduplicated, with at most 6 vertices.
pub fn small_corpus() -> Vec<Case> {
    let mut seen = BTreeSet::new();
    let balanced = balanced_corpus();
    let flattened: Vec<Case> = balanced.iter().map(|c| Case { graph: flatten(&c.graph), ..c.clone() }).collect();
    let mut all = REGULAR.clone();
    all.extend(pure_loop_corpus());
    all.extend(balanced);
    all.extend(flattened);
    all.extend(broad_infinity_corpus());
    all.into_iter()
        .filter(|c| c.graph.vertices.len() <= 6)
        .filter(|c| seen.insert(canonical_form(&c.graph)))
        .collect()
}

pub fn audit_automorphisms_and_canonical_forms() -> String {
    let corpus = small_corpus();
    assert!(corpus.len() >= 500, "{}", corpus.len());
    let mut r = rng(7);
    for c in &corpus {
        assert!(validate(&c.graph, &c.ws, &c.dd).is_valid());
        assert_eq!(automorphism_order(&c.graph), brute_automorphisms(&c.graph), "{:?}", c.graph);
        for _ in 0..3 {
            let h = random_relabel(&c.graph, &mut r);
            assert_eq!(canonical_form(&h), canonical_form(&c.graph));
            assert!(brute_isomorphic(&c.graph, &h));
        }
    }
    // Distinct canonical forms must be non-isomorphic.
    let mut buckets: BTreeMap<(usize, usize), Vec<&DecoratedGraph>> = BTreeMap::new();
    for c in &corpus {
        buckets.entry((c.graph.vertices.len(), c.graph.edges.len())).or_default().push(&c.graph);
    }
    let mut pairs = 0;
    for graphs in buckets.values() {
        for (i, a) in graphs.iter().enumerate() {
            for b in &graphs[i + 1..] {
                assert!(!brute_isomorphic(a, b), "{a:?} ~ {b:?}");
                pairs += 1;
            }
        }
    }
    format!("{} graphs, {pairs} non-isomorphic pairs", corpus.len())
}

/// Configurations small enough for the exhaustive reference enumerator.
pub const BRUTE_CONFIGS: &[Config] = &[
    ("11112", 0, &[], (0, 1), (0, 1), 1, Some([3, 3, 6, 1, 1])),
    ("11112", 0, &[], (1, 1), (0, 1), 1, Some([3, 3, 6, 1, 1])),
    ("11112", 0, &[], (0, 1), (1, 3), 2, Some([3, 2, 6, 0, 1])),
    ("11112", 0, &["rho"], (1, 1), (0, 1), 2, Some([3, 2, 6, 1, 1])),
    ("11112", 1, &[], (1, 1), (0, 1), 2, Some([3, 3, 6, 1, 1])),
    ("11114", 0, &[], (0, 1), (1, 2), 1, Some([3, 2, 8, 0, 1])),
];

pub fn canonical_set(graphs: &[DecoratedGraph]) -> BTreeSet<CanonicalForm> {
    graphs.iter().map(canonical_form).collect()
}

pub fn audit_enumeration_equivalence() -> String {
    let mut nonempty = 0;
    let mut total = 0;
    for c in BRUTE_CONFIGS {
        let (p, g, mk, d0, dinf, n, caps) = *c;
        let ws = preset(p);
        let dd = data(&ws, g, mk, d0, dinf, n);
        let caps = caps_for(&ws, &dd, caps);
        let fast = enumerate_flat_regular(&ws, &dd, &caps).unwrap();
        let brute = brute_force_enumerate(&ws, &dd, &caps).unwrap();
        assert_eq!(canonical_set(&fast.graphs), canonical_set(&brute), "{c:?}");
        assert_eq!(fast.graphs.len(), brute.len(), "{c:?}");
        nonempty += usize::from(!brute.is_empty());
        total += brute.len();
    }
    assert!(nonempty >= 5);
    format!("{} configurations, {total} graphs", BRUTE_CONFIGS.len())
}

fn is_v01(g: &DecoratedGraph, v: usize) -> bool {
    g.valence(v) == 1 && g.vertices[v].legs.is_empty() && g.vertices[v].genus == 0
}

/// Shifts read off the graph: -1 at a smooth contracted end.
fn flags_of(g: &DecoratedGraph, v: usize, vp: usize) -> DeltaFlags {
    let s = |b: bool| if b { -1 } else { 0 };
    let (d, dp) = (s(is_v01(g, v)), s(is_v01(g, vp)));
    DeltaFlags { delta: d, delta_prime: dp, delta_rho: d, delta_rho_prime: dp }
}

/// `(v, v')` with `v'` the level-1 end, or the first end of an E11 edge.
fn ends(g: &DecoratedGraph, e: usize) -> (usize, usize) {
    let (a, b) = g.edges[e].ends;
    match g.edges[e].kind {
        EdgeType::E11 => (b, a),
        _ if g.vertices[a].level == Level::One => (b, a),
        _ => (a, b),
    }
}

fn to_i64(x: &Q) -> i64 {
    x.to_integer().try_into().unwrap()
}

/// Edge factors for every shift pattern against the closed forms.
pub fn audit_edge_factors() -> usize {
    let mut r = rng(1);
    let mut audited = 0;
    for p in PRESETS {
        let ws = preset(p);
        let (a, k) = (ws.a(), ws.k() as i64);
        for hours in 1..=3u32 {
            let pt = Point::random(hours, 0, &mut r);
            for f in DeltaFlags::all() {
                for d in 1..=2 {
                    let alpha = 1 + (d as u32 % hours);
                    for (range, coh) in [(E01Range::Final, false), (E01Range::Cohomology, true)] {
                        let got = pt.eval(&e01_factor(&ws, hours, alpha, 3, d, f, range), 3, 0).unwrap();
                        assert_eq!(got, closed_forms::e01(a, k, hours, alpha, d, f, coh, &pt), "{p} E01 d{d} {f:?}");
                        audited += 1;
                    }
                    if hours >= 2 {
                        let beta = 1 + (alpha % hours);
                        for (form, shifted) in [(E11Form::Symmetric, false), (E11Form::Shifted, true)] {
                            let got = pt.eval(&e11_factor(&ws, hours, alpha, beta, d, f, form).unwrap(), 0, 0).unwrap();
                            let want = closed_forms::e11(a, k, hours, alpha, beta, d, f, shifted, &pt);
                            assert_eq!(got, want, "{p} E11 d{d} {f:?} {form:?}");
                            audited += 1;
                        }
                    }
                }
                for j in [1, 2, k - 1, k + 1, 2 * k - 1] {
                    let d = q(-j, k);
                    if j == 1 && f.delta == -1 {
                        // Both ends would be scheme points: the edge is unstable.
                        assert!(e1inf_factor(&ws, hours, 1, &d, f).is_err());
                        continue;
                    }
                    let got = pt.eval(&e1inf_factor(&ws, hours, 1, &d, f).unwrap(), 0, 0).unwrap();
                    assert_eq!(got, closed_forms::e1inf(a, k, hours, 1, &d, f, &pt), "{p} E1Inf {d} {f:?}");
                    audited += 1;
                }
            }
        }
    }
    audited
}

pub fn audit_level_one_vertices() -> usize {
    let mut r = rng(2);
    let mut audited = 0;
    for p in PRESETS {
        let ws = preset(p);
        for hours in 1..=3u32 {
            for g in 0..=3u32 {
                for n_edges in 1..=3u32 {
                    let pt = Point::random(hours, g, &mut r);
                    let f = level_one_vertex_factor(&ws, hours, hours, g, n_edges, 4).unwrap();
                    let want = closed_forms::level_one_vertex(ws.a(), ws.k() as i64, hours, hours, n_edges, &pt);
                    assert_eq!(pt.eval(&f, 0, 4).unwrap(), want, "{p} N{hours} g{g} n{n_edges}");
                    audited += 1;
                }
            }
        }
    }
    audited
}

/// Every edge, flag and level-1 vertex of the enumerated corpus against the
/// closed forms, with shifts and stacky orders computed here. Returns counts of
/// `[edges, tangent weights, nodes, level-1 vertices]`.
pub fn audit_graph_factors() -> [usize; 4] {
    let mut r = rng(3);
    let mut seen = [0usize; 4];
    for case in REGULAR.iter() {
        let g = &case.graph;
        let c = ctx(case);
        let (a, k, n) = (case.ws.a(), case.ws.k() as i64, case.dd.hours);
        let genus = g.vertices.iter().map(|v| v.genus).max().unwrap_or(0);
        let pt = Point::random(n, genus, &mut r);
        for e in 0..g.edges.len() {
            let edge = &g.edges[e];
            if edge.kind == EdgeType::EInfInf {
                continue;
            }
            let (v, vp) = ends(g, e);
            let f = flags_of(g, v, vp);
            let alpha = g.vertices[vp].hour.unwrap();
            let want = match edge.kind {
                EdgeType::E01 => closed_forms::e01(a, k, n, alpha, to_i64(&edge.d0), f, false, &pt),
                EdgeType::E1Inf => closed_forms::e1inf(a, k, n, alpha, &edge.d_l(), f, &pt),
                EdgeType::E11 => {
                    let beta = g.vertices[v].hour.unwrap();
                    closed_forms::e11(a, k, n, alpha, beta, to_i64(&edge.d0), f, false, &pt)
                }
                _ => unreachable!(),
            };
            assert_eq!(pt.eval(&edge_contribution(&c, g, e).unwrap(), e as u32, 0).unwrap(), want);
            seen[0] += 1;

            for end in [edge.ends.0, edge.ends.1] {
                let w = pt.eval(&tangent_weight(&c, g, e, end).unwrap(), e as u32, 0).unwrap();
                let want = match edge.kind {
                    EdgeType::E01 => {
                        let x = closed_forms::tangent_e01_zero(&edge.d0, alpha, &pt);
                        if g.vertices[end].level == Level::Zero { x } else { -x }
                    }
                    EdgeType::E1Inf => {
                        let d = edge.d_l();
                        let ke: i64 = d.denom().try_into().unwrap();
                        let (wi, w1) = closed_forms::tangent_e1inf(k, &d, ke, is_v01(g, v), alpha, &pt);
                        if end == v { wi } else { w1 }
                    }
                    _ => {
                        let other = edge.ends.0 + edge.ends.1 - end;
                        (pt.t(g.vertices[other].hour.unwrap()) - pt.t(g.vertices[end].hour.unwrap())) / &edge.d0
                    }
                };
                assert_eq!(w, want, "tangent {:?} at {end}", edge.kind);
                seen[1] += 1;

                if g.is_stable(end) {
                    let node = pt.eval(&node_contribution(&c, g, e, end).unwrap(), e as u32, 0).unwrap();
                    let vx = &g.vertices[end];
                    let want = match vx.level {
                        Level::Zero => closed_forms::node_level_zero(n, &pt),
                        Level::One => closed_forms::node_level_one(a, k, n, vx.hour.unwrap(), &pt),
                        Level::Inf => closed_forms::node_level_inf(n, vx.hour.unwrap(), &pt),
                    };
                    assert_eq!(node, want, "node at level {}", vx.level);
                    seen[2] += 1;
                }
            }
        }
        for v in 0..g.vertices.len() {
            if g.vertices[v].level == Level::One && g.is_stable(v) {
                let vp = Point { lambda: pt.lambda[..=g.vertices[v].genus as usize].to_vec(), ..pt.clone() };
                let got = vp.eval(&vertex_contribution(&c, g, v).unwrap(), 0, v as u32).unwrap();
                let want = closed_forms::level_one_vertex(a, k, n, g.vertices[v].hour.unwrap(), g.valence(v) as u32, &vp);
                assert_eq!(got, want);
                seen[3] += 1;
            }
        }
    }
    assert!(seen.iter().all(|&s| s > 0), "{seen:?}");
    seen
}

/// Contracted vertices: `w` for one branch, 1 with a leg, node over the
/// sum of weights for two branches.
pub fn audit_unstable_vertices() -> usize {
    let mut r = rng(4);
    let mut seen = 0;
    for case in REGULAR.iter() {
        let g = &case.graph;
        let c = ctx(case);
        let pt = Point::random(case.dd.hours, 0, &mut r);
        for v in 0..g.vertices.len() {
            if g.vertices[v].level == Level::Inf || g.is_stable(v) {
                continue;
            }
            let edges: Vec<usize> = g.edges_at(v).collect();
            let got = pt.eval(&vertex_contribution(&c, g, v).unwrap(), 0, 0).unwrap();
            let w = |e: usize| pt.eval(&tangent_weight(&c, g, e, v).unwrap(), 0, 0).unwrap();
            let want = match g.unstable_kind(v).unwrap() {
                Unstable::V01 => w(edges[0]),
                Unstable::V11 => qi(1),
                Unstable::V02 => {
                    let node = match g.vertices[v].level {
                        Level::Zero => closed_forms::node_level_zero(case.dd.hours, &pt),
                        _ => closed_forms::node_level_one(case.ws.a(), case.ws.k() as i64, case.dd.hours, g.vertices[v].hour.unwrap(), &pt),
                    };
                    node / (w(edges[0]) + w(edges[1]))
                }
            };
            assert_eq!(got, want, "{:?}", g.unstable_kind(v));
            seen += 1;
        }
    }
    assert!(seen > 0);
    seen
}

/// `t_a, h, psi` of degree 1, `lambda_i` of degree `i`, opaque tokens 0.
pub fn grading(v: &Variable) -> i64 {
    match v {
        Variable::Lambda(_, i) => *i as i64,
        Variable::Token(_) => 0,
        _ => 1,
    }
}

pub fn audit_homogeneity() -> String {
    let mut graphs = 0;
    let mut factors = 0;
    for case in REGULAR.iter() {
        let c = assemble_graph(&ctx(case), &case.graph, &case.dd).unwrap();
        let mut total = 0;
        for f in &c.factors {
            let d = f.value.homogeneous_degree(&grading);
            assert!(d.is_some(), "{} not homogeneous", f.label());
            assert_eq!(d, f.degree);
            total += d.unwrap();
            factors += 1;
        }
        assert_eq!(c.degree, Some(total));
        assert_eq!(c.inverse_euler.homogeneous_degree(&grading), Some(total));
        graphs += 1;
    }
    assert!(graphs >= 100, "{graphs}");
    format!("{graphs} graphs, {factors} factors")
}

pub fn assembled(case: &Case, g: &DecoratedGraph, options: EvalOptions) -> RatFunc {
    let c = EvalContext::new(case.ws.clone(), case.dd.hours).with_options(options);
    assemble_graph(&c, g, &case.dd).unwrap().term()
}

pub fn multi_hour() -> Vec<&'static Case> {
    REGULAR.iter().filter(|c| c.dd.hours >= 2).collect()
}

pub fn check_hour_relabeling(case: &Case, sigma: &[u32]) {
    let lhs = assembled(case, &permute_hours(&case.graph, sigma), EvalOptions::default());
    let rhs = assembled(case, &case.graph, EvalOptions::default()).substitute(&hour_substitution(sigma)).unwrap();
    assert_eq!(lhs, rhs, "sigma {sigma:?} on {:?}", case.graph);
}

pub fn swap_e11_ends(g: &DecoratedGraph) -> DecoratedGraph {
    let mut h = g.clone();
    for e in &mut h.edges {
        if e.kind == EdgeType::E11 {
            e.ends = (e.ends.1, e.ends.0);
        }
    }
    h
}

/// Hour relabeling on every multi-hour contribution, edge reversal on every
/// contribution with an E11 edge, and the E11 factor under swapped ends.
pub fn audit_symmetry(relabelings_per_graph: usize) -> String {
    let mut r = rng(5);
    let mut relabeled = 0;
    for case in multi_hour() {
        for _ in 0..relabelings_per_graph {
            check_hour_relabeling(case, &random_permutation(case.dd.hours, &mut r));
            relabeled += 1;
        }
    }
    let mut reversed = 0;
    for case in REGULAR.iter().filter(|c| c.graph.count_edges(EdgeType::E11) > 0) {
        let lhs = assembled(case, &case.graph, EvalOptions::default());
        assert_eq!(lhs, assembled(case, &swap_e11_ends(&case.graph), EvalOptions::default()));
        reversed += 1;
    }
    let ws = preset("11112");
    for f in DeltaFlags::all() {
        for d in 1..=2 {
            let fwd = e11_factor(&ws, 3, 1, 3, d, f, E11Form::Symmetric).unwrap();
            let back = e11_factor(&ws, 3, 3, 1, d, f.swapped(), E11Form::Symmetric).unwrap();
            assert_eq!(fwd, back, "{f:?} d{d}");
        }
    }
    assert!(relabeled + reversed >= 100, "{relabeled} + {reversed}");
    assert!(reversed > 0);
    format!("{relabeled} relabelings, {reversed} reversed E11 contributions")
}

/// Ten flattened graphs (E0Inf edges) and ten with broad or trivial
/// infinity sectors.
pub fn pruning_mutants() -> Vec<Case> {
    let mut mutants: Vec<Case> = balanced_corpus()
        .into_iter()
        .step_by(37)
        .map(|c| Case { graph: flatten(&c.graph), ..c })
        .take(10)
        .collect();
    mutants.extend(broad_infinity_corpus().into_iter().step_by(3).take(10));
    mutants
}

pub fn audit_pruning() -> String {
    let mutants = pruning_mutants();
    assert_eq!(mutants.len(), 20);
    for case in &mutants {
        assert!(validate(&case.graph, &case.ws, &case.dd).is_valid());
        assert_eq!(classify(&case.graph, &case.ws).unwrap(), GraphClass::Irregular, "{:?}", case.graph);
        let err = assemble_graph(&ctx(case), &case.graph, &case.dd).unwrap_err();
        assert_eq!(err, EvalError::NotRegular);
    }
    let e0inf = mutants.iter().filter(|c| c.graph.count_edges(EdgeType::E0Inf) > 0).count();
    format!("{} mutants ({e0inf} with E0Inf edges)", mutants.len())
}

pub const DETERMINISM_CONFIG: &str = r#"
preset = "11112"
hours = 2
genus = 0
d0 = "0"
dinf = "1"
oracle = "symbolic"
formats = ["json", "csv", "dot"]
"#;

fn artifacts(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        out.insert(p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap());
    }
    out
}

/// The full pipeline, uncached, `runs` times at each thread count.
pub fn audit_determinism(threads: &[usize], runs: usize) -> String {
    let root = tempfile::tempdir().unwrap();
    let mut reference: Option<BTreeMap<String, Vec<u8>>> = None;
    for &t in threads {
        for run in 0..runs {
            let mut cfg = RunConfig::from_toml(DETERMINISM_CONFIG).unwrap();
            cfg.threads = Some(t);
            let resolved = cfg.resolve(root.path()).unwrap();
            let out = root.path().join(format!("t{t}-r{run}"));
            run_evaluate(&resolved, &RunOptions { out: out.clone(), cache: None }).unwrap();
            let got = artifacts(&out);
            match &reference {
                None => {
                    assert!(got.len() >= 4, "{:?}", got.keys());
                    reference = Some(got);
                }
                Some(r) => assert!(r == &got, "threads {t} run {run} differs"),
            }
        }
    }
    let files = reference.unwrap();
    format!("{} runs, {} files", threads.len() * runs, files.len())
}
