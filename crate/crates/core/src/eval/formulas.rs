use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{DeltaFlags, E01Range, E11Form, EvalContext, EvalError, RhoDeltaRule};
use crate::algebra::{hodge_euler, qi, Polynomial, RatFunc, Variable, Q};
use crate::graph::{flag_monodromy, DecoratedGraph, EdgeId, EdgeType, GraphError, Level, Unstable, VertexId};
use crate::model::{Marking, WeightSystem};

pub(crate) fn t(alpha: u32) -> RatFunc {
    RatFunc::var(Variable::t(alpha))
}

fn h(e: EdgeId) -> RatFunc {
    RatFunc::var(Variable::h(e as u32))
}

fn c(x: Q) -> RatFunc {
    RatFunc::constant(x)
}

fn recip(x: &Q) -> Result<Q, EvalError> {
    if x.is_zero() {
        Err(crate::algebra::AlgebraError::DivisionByZero.into())
    } else {
        Ok(x.recip())
    }
}

fn to_i64(x: &Q) -> i64 {
    x.to_integer().to_i64().expect("degree out of range")
}

fn integral_degree(e: EdgeId, d: &Q) -> Result<i64, EvalError> {
    if d.is_integer() {
        Ok(to_i64(d))
    } else {
        Err(EvalError::NonIntegralDegree(e, d.clone()))
    }
}

fn hour(graph: &DecoratedGraph, v: VertexId) -> Result<u32, EvalError> {
    graph.vertices[v]
        .hour
        .ok_or_else(|| GraphError::Malformed(format!("vertex {v} has no hour")).into())
}

fn check_flag(graph: &DecoratedGraph, e: EdgeId, v: VertexId) -> Result<(), EvalError> {
    if e < graph.edges.len() && v < graph.vertices.len() && graph.edges[e].touches(v) {
        Ok(())
    } else {
        Err(GraphError::NotAFlag(e, v).into())
    }
}

fn prod(range: impl Iterator<Item = RatFunc>) -> RatFunc {
    range.fold(RatFunc::one(), |acc, f| &acc * &f)
}

/// `(v, v')` of an edge: for E01 and E1Inf `v'` is the level-1 end; for E11
/// `v'` is the first end (hour α) and `v` the second (hour β).
pub fn oriented_ends(graph: &DecoratedGraph, e: EdgeId) -> Result<(VertexId, VertexId), EvalError> {
    let edge = &graph.edges[e];
    match edge.kind {
        EdgeType::E01 | EdgeType::E1Inf => {
            let one = graph.end_at(e, Level::One).ok_or_else(|| GraphError::Malformed(format!("edge {e} has no level-1 end")))?;
            Ok((edge.other(one), one))
        }
        EdgeType::E11 => Ok((edge.ends.1, edge.ends.0)),
        kind => Err(EvalError::UnsupportedEdgeType(e, kind)),
    }
}

fn is_v01(graph: &DecoratedGraph, v: VertexId) -> bool {
    graph.unstable_kind(v) == Some(Unstable::V01)
}

fn carries_rho_node(graph: &DecoratedGraph, v: VertexId) -> bool {
    graph.unstable_kind(v) == Some(Unstable::V11) && graph.vertices[v].legs.iter().any(|l| l.marking == Marking::RhoUnit)
}

pub fn delta_flags(graph: &DecoratedGraph, e: EdgeId, rule: RhoDeltaRule) -> Result<DeltaFlags, EvalError> {
    let (v, vp) = oriented_ends(graph, e)?;
    let sign = |b: bool| if b { -1 } else { 0 };
    let (delta, delta_prime) = (sign(is_v01(graph, v)), sign(is_v01(graph, vp)));
    let (delta_rho, delta_rho_prime) = match rule {
        RhoDeltaRule::SameAsDelta => (delta, delta_prime),
        RhoDeltaRule::RhoMarking => (sign(carries_rho_node(graph, v)), sign(carries_rho_node(graph, vp))),
    };
    Ok(DeltaFlags { delta, delta_prime, delta_rho, delta_rho_prime })
}

/// Torus weight of the tangent line of the edge curve at the flag `(e, v)`.
pub fn tangent_weight(ctx: &EvalContext, graph: &DecoratedGraph, e: EdgeId, v: VertexId) -> Result<RatFunc, EvalError> {
    check_flag(graph, e, v)?;
    let edge = &graph.edges[e];
    let k = ctx.ws.k() as i64;
    match edge.kind {
        EdgeType::E01 => {
            let (_, one) = oriented_ends(graph, e)?;
            let x = (h(e) + t(hour(graph, one)?)).scale(&recip(&edge.d0)?);
            Ok(if graph.vertices[v].level == Level::Zero { x } else { -x })
        }
        EdgeType::E1Inf => {
            let (inf, one) = oriented_ends(graph, e)?;
            let ta = t(hour(graph, one)?);
            let d = edge.d_l();
            let (w_inf, w_one) = if is_v01(graph, inf) {
                let w = ta.scale(&(qi(k) * recip(&(&d * qi(k) + qi(1)))?));
                (w.clone(), -w)
            } else {
                let ke = ctx.options.stacky_order.order(&d);
                (ta.scale(&recip(&(&d * qi(ke)))?), -ta.scale(&recip(&d)?))
            };
            Ok(if v == inf { w_inf } else { w_one })
        }
        EdgeType::E11 => {
            let other = edge.other(v);
            Ok((t(hour(graph, other)?) - t(hour(graph, v)?)).scale(&recip(&edge.d0)?))
        }
        kind => Err(EvalError::UnsupportedEdgeType(e, kind)),
    }
}

/// Moving part of an E01 edge of integer degree `d` at hour `alpha`.
pub fn e01_factor(ws: &WeightSystem, hours: u32, alpha: u32, e: EdgeId, d: i64, f: DeltaFlags, range: E01Range) -> RatFunc {
    let k = ws.k() as i64;
    let dq = qi(d);
    let x = (h(e) + t(alpha)).scale(&dq.recip());
    let shift = qi(f.delta_prime + f.delta_rho_prime) / &dq;
    let (lo, hi) = match range {
        E01Range::Final => (1, k * d - 1 - f.delta_prime - f.delta_rho_prime),
        E01Range::Cohomology => (1 + f.delta + f.delta_rho, k * d - 1 - f.delta - f.delta_rho_prime),
    };
    let base = h(e).scale(&(qi(-k) + shift));
    let num = prod((lo..=hi).map(|j| &base + &x.scale(&qi(j))));
    let mut den = RatFunc::one();
    for ai in ws.a() {
        let ai = ai as i64;
        den = den * prod((1..=ai * d).map(|j| h(e).scale(&qi(ai)) - x.scale(&qi(j))));
    }
    den = den * prod((1..=d).map(|j| x.scale(&qi(j))));
    for beta in (1..=hours).filter(|&b| b != alpha) {
        den = den * prod((1..=d).map(|j| x.scale(&qi(j)) + t(beta) - t(alpha)));
    }
    num.div(&den).expect("E01 denominator is a product of nonzero linear forms")
}

/// Moving part of an E1Inf edge with line-bundle degree `d < 0` at hour
/// `alpha`; `f.delta` is -1 when the infinity end is a smooth contracted point.
pub fn e1inf_factor(ws: &WeightSystem, hours: u32, alpha: u32, d: &Q, f: DeltaFlags) -> Result<RatFunc, EvalError> {
    let k = ws.k() as i64;
    let kd = d * qi(k);
    let scale = qi(k) * recip(&(&kd - qi(f.delta)))?;
    let ta = t(alpha);
    let mut num = RatFunc::one();
    for ai in ws.a() {
        let ai = ai as i64;
        let top = to_i64(&(-(d * qi(ai))).ceil()) - 1;
        num = num * prod((1..=top).map(|j| ta.scale(&(qi(-ai) + &scale * qi(j)))));
    }
    let top = to_i64(&-kd) + f.delta_prime + f.delta_rho_prime;
    let mut den = prod((1..=top).map(|j| ta.scale(&(-&scale * qi(j)))));
    den = den * prod((1..=to_i64(&(-d).floor())).map(|j| ta.scale(&(&scale * qi(j)))));
    den = den * prod((1..=hours).filter(|&b| b != alpha).map(|b| t(b) - t(alpha)));
    Ok(num.div(&den)?)
}

/// Moving part of an E11 edge of degree `d` from hour `alpha` (end `v'`) to
/// hour `beta` (end `v`).
pub fn e11_factor(ws: &WeightSystem, hours: u32, alpha: u32, beta: u32, d: i64, f: DeltaFlags, form: E11Form) -> Result<RatFunc, EvalError> {
    let k = ws.k() as i64;
    let dq = qi(d);
    let (ta, tb) = (t(alpha), t(beta));
    let fact: Q = (1..=d).map(qi).product();
    let sign = if d.is_odd() { -1 } else { 1 };
    let lead = qi(sign) * num_traits::pow(dq.clone(), 2 * d as usize) / (&fact * &fact);
    let pre = c(lead).div(&(&tb - &ta).pow(2 * d as u32))?;
    let s = f.delta + f.delta_rho;
    let sp = f.delta_prime + f.delta_rho_prime;
    let diff = (&ta - &tb).scale(&dq.recip());
    let base = match form {
        E11Form::Symmetric => ta.scale(&qi(k)),
        E11Form::Shifted => ta.scale(&(qi(k) - qi(s) / &dq)),
    };
    let num = prod((1 + sp..=k * d - 1 - s).map(|j| &base - &diff.scale(&qi(j))));
    let split = |total: i64| {
        (0..=total).map(move |a| (qi(a) / qi(d), qi(total - a) / qi(d)))
    };
    let mut den = RatFunc::one();
    for ai in ws.a() {
        den = den * prod(split(ai as i64 * d).map(|(x, y)| -ta.scale(&x) - tb.scale(&y)));
    }
    for gamma in (1..=hours).filter(|&g| g != alpha && g != beta) {
        den = den * prod(split(d).map(|(x, y)| t(gamma) - ta.scale(&x) - tb.scale(&y)));
    }
    Ok(pre * num.div(&den)?)
}

/// `A'_e` with explicitly supplied shifts.
pub fn edge_contribution_with(ctx: &EvalContext, graph: &DecoratedGraph, e: EdgeId, f: DeltaFlags) -> Result<RatFunc, EvalError> {
    let edge = &graph.edges[e];
    let (v, vp) = oriented_ends(graph, e)?;
    let alpha = hour(graph, vp)?;
    match edge.kind {
        EdgeType::E01 => {
            let d = integral_degree(e, &edge.d0)?;
            Ok(e01_factor(&ctx.ws, ctx.hours, alpha, e, d, f, ctx.options.e01_range))
        }
        EdgeType::E1Inf => e1inf_factor(&ctx.ws, ctx.hours, alpha, &edge.d_l(), f),
        EdgeType::E11 => {
            let d = integral_degree(e, &edge.d0)?;
            e11_factor(&ctx.ws, ctx.hours, alpha, hour(graph, v)?, d, f, ctx.options.e11_form)
        }
        kind => Err(EvalError::UnsupportedEdgeType(e, kind)),
    }
}

/// `A'_e` with shifts read off the incident vertices.
pub fn edge_contribution(ctx: &EvalContext, graph: &DecoratedGraph, e: EdgeId) -> Result<RatFunc, EvalError> {
    let f = delta_flags(graph, e, ctx.options.rho_delta)?;
    edge_contribution_with(ctx, graph, e, f)
}

/// Moving part of the node at the flag `(e, v)`.
pub fn node_contribution(ctx: &EvalContext, graph: &DecoratedGraph, e: EdgeId, v: VertexId) -> Result<RatFunc, EvalError> {
    check_flag(graph, e, v)?;
    let kind = graph.edges[e].kind;
    if kind == EdgeType::EInfInf {
        return Err(EvalError::UnsupportedEdgeType(e, kind));
    }
    let others = |alpha: u32| (1..=ctx.hours).filter(move |&b| b != alpha);
    match graph.vertices[v].level {
        Level::Zero => Ok(prod((1..=ctx.hours).map(|a| h(e) + t(a)))),
        Level::One => {
            let alpha = hour(graph, v)?;
            let a_prod: i64 = ctx.ws.a().iter().map(|&x| x as i64).product();
            let lead = t(alpha).pow(6).scale(&qi(-(ctx.ws.k() as i64) * a_prod));
            Ok(lead * prod(others(alpha).map(|b| t(alpha) - t(b))))
        }
        Level::Inf => {
            let alpha = hour(graph, v)?;
            let m = flag_monodromy(graph, e, v, ctx.ws.k())?;
            if m.is_trivial() || !ctx.ws.is_narrow_sector(m.b) {
                return Err(EvalError::BroadInfinityNode(e, v));
            }
            Ok(prod(others(alpha).map(|b| t(b) - t(alpha))))
        }
    }
}

/// `A'_(e,v) / (w_(e,v) - ψ_(e,v))`.
pub fn flag_factor(ctx: &EvalContext, graph: &DecoratedGraph, e: EdgeId, v: VertexId) -> Result<RatFunc, EvalError> {
    let node = node_contribution(ctx, graph, e, v)?;
    let w = tangent_weight(ctx, graph, e, v)?;
    let psi = RatFunc::var(Variable::psi(e as u32, v as u32));
    Ok(node.div(&(w - psi))?)
}

/// Explicit factor of a stable level-1 vertex of genus `g` with `n_edges`
/// incident edges at hour `alpha`; λ classes are indexed by `vertex`.
pub fn level_one_vertex_factor(ws: &WeightSystem, hours: u32, alpha: u32, g: u32, n_edges: u32, vertex: u32) -> Result<RatFunc, EvalError> {
    let ta = Polynomial::var(Variable::t(alpha));
    let k = ws.k() as i64;
    let mut out = RatFunc::one();
    for ai in ws.a() {
        let w = ta.scale(&qi(-(ai as i64)));
        out = out * RatFunc::from_poly(hodge_euler(g, &w, true, vertex)).div(&RatFunc::from_poly(w))?;
    }
    let kt = ta.scale(&qi(k));
    let den = RatFunc::from_poly(hodge_euler(g, &kt, false, vertex)) * RatFunc::from_poly(kt.pow(n_edges));
    out = out * RatFunc::from_poly(kt).div(&den)?;
    for beta in (1..=hours).filter(|&b| b != alpha) {
        let w = &Polynomial::var(Variable::t(beta)) - &ta;
        out = out * RatFunc::from_poly(hodge_euler(g, &w, true, vertex)).div(&RatFunc::from_poly(w))?;
    }
    Ok(out)
}

/// Token standing for the opaque pushforward factor of a stable level-0 or
/// level-infinity vertex.
pub(crate) fn vertex_token(graph: &DecoratedGraph, v: VertexId) -> Variable {
    let prefix = if graph.vertices[v].level == Level::Zero { "E0" } else { "Einf" };
    Variable::token(&format!("{prefix}_v{v}"))
}

/// `A_v`: explicit for level-1 stable vertices, an opaque token (times the
/// explicit hour product at infinity) for other stable vertices, and the
/// unstable-vertex table otherwise.
pub fn vertex_contribution(ctx: &EvalContext, graph: &DecoratedGraph, v: VertexId) -> Result<RatFunc, EvalError> {
    let vx = &graph.vertices[v];
    if graph.is_stable(v) {
        return match vx.level {
            Level::One => level_one_vertex_factor(&ctx.ws, ctx.hours, hour(graph, v)?, vx.genus, graph.valence(v) as u32, v as u32),
            Level::Zero => Ok(RatFunc::var(vertex_token(graph, v))),
            Level::Inf => {
                let alpha = hour(graph, v)?;
                let ta = Polynomial::var(Variable::t(alpha));
                let mut out = RatFunc::var(vertex_token(graph, v));
                for beta in (1..=ctx.hours).filter(|&b| b != alpha) {
                    let w = &Polynomial::var(Variable::t(beta)) - &ta;
                    out = out * RatFunc::from_poly(hodge_euler(vx.genus, &w, true, v as u32)).div(&RatFunc::from_poly(w))?;
                }
                Ok(out)
            }
        };
    }
    let edges: Vec<EdgeId> = graph.edges_at(v).collect();
    match graph.unstable_kind(v) {
        Some(Unstable::V01) => tangent_weight(ctx, graph, edges[0], v),
        Some(Unstable::V11) => Ok(RatFunc::one()),
        Some(Unstable::V02) => {
            let node = node_contribution(ctx, graph, edges[0], v)?;
            let sum = tangent_weight(ctx, graph, edges[0], v)? + tangent_weight(ctx, graph, edges[1], v)?;
            Ok(node.div(&sum)?)
        }
        None => Err(GraphError::Malformed(format!("vertex {v} is neither stable nor a contracted point")).into()),
    }
}
