//! The closed-form localization factors, evaluated numerically at a point.
//! These share no code with the library's symbolic construction.

use std::collections::BTreeMap;

use msploc::algebra::{q, qi, RatFunc, Variable, Q};
use msploc::eval::DeltaFlags;
use num_traits::{One, Zero};
use rand::Rng;

/// Values of the equivariant parameters, one edge class, and λ classes.
#[derive(Clone, Debug)]
pub struct Point {
    pub t: Vec<Q>,
    pub h: Q,
    pub lambda: Vec<Q>,
}

impl Point {
    /// A random point with distinct small rational coordinates.
    pub fn random(hours: u32, genus: u32, rng: &mut impl Rng) -> Point {
        let mut t: Vec<Q> = Vec::new();
        while t.len() < hours as usize {
            let x = q(rng.gen_range(-40..=40), rng.gen_range(1..=7));
            if !x.is_zero() && !t.contains(&x) {
                t.push(x);
            }
        }
        let h = q(rng.gen_range(1..=50), rng.gen_range(1..=11)) + q(1, 97);
        let mut lambda = vec![Q::one()];
        lambda.extend((0..genus).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=5))));
        Point { t, h, lambda }
    }

    pub fn t(&self, alpha: u32) -> Q {
        self.t[alpha as usize - 1].clone()
    }

    /// Substitution evaluating library output at this point. Every edge
    /// class `h` takes the same value, so `edge` only needs to exist;
    /// `vertex` owns the λ classes.
    pub fn bindings(&self, edge: u32, vertex: u32) -> BTreeMap<Variable, RatFunc> {
        let mut out: BTreeMap<Variable, RatFunc> = self
            .t
            .iter()
            .enumerate()
            .map(|(i, x)| (Variable::t(i as u32 + 1), RatFunc::constant(x.clone())))
            .collect();
        for e in 0..=edge.max(32) {
            out.insert(Variable::h(e), RatFunc::constant(self.h.clone()));
        }
        for (i, l) in self.lambda.iter().enumerate().skip(1) {
            out.insert(Variable::lambda(vertex, i as u32), RatFunc::constant(l.clone()));
        }
        out
    }

    pub fn eval(&self, f: &RatFunc, edge: u32, vertex: u32) -> Option<Q> {
        f.substitute(&self.bindings(edge, vertex)).ok()?.constant_value()
    }
}

fn product(it: impl Iterator<Item = Q>) -> Q {
    it.fold(Q::one(), |a, b| a * b)
}

fn others(hours: u32, skip: &[u32]) -> impl Iterator<Item = u32> + '_ {
    (1..=hours).filter(move |b| !skip.contains(b))
}

/// E01 edge of degree `d`; `cohomology` selects the alternative index range.
#[allow(clippy::too_many_arguments)]
pub fn e01(a: [u32; 5], k: i64, hours: u32, alpha: u32, d: i64, f: DeltaFlags, cohomology: bool, p: &Point) -> Q {
    let (h, ta) = (p.h.clone(), p.t(alpha));
    let x = (&h + &ta) / qi(d);
    let sp = f.delta_prime + f.delta_rho_prime;
    let (lo, hi) = if cohomology {
        (1 + f.delta + f.delta_rho, k * d - 1 - f.delta - f.delta_rho_prime)
    } else {
        (1, k * d - 1 - sp)
    };
    let num = product((lo..=hi).map(|j| qi(-k) * &h + q(sp, d) * &h + qi(j) * &x));
    let mut den = Q::one();
    for ai in a {
        let ai = ai as i64;
        den *= product((1..=ai * d).map(|j| qi(ai) * &h - qi(j) * &x));
    }
    den *= product((1..=d).map(|j| qi(j) * &x));
    for b in others(hours, &[alpha]) {
        den *= product((1..=d).map(|j| qi(j) * &x + p.t(b) - &ta));
    }
    num / den
}

/// E1Inf edge whose line bundle has degree `d < 0`.
pub fn e1inf(a: [u32; 5], k: i64, hours: u32, alpha: u32, d: &Q, f: DeltaFlags, p: &Point) -> Q {
    let ta = p.t(alpha);
    // d = -num/den in lowest terms.
    let (num, den) = ((-d).numer().clone(), d.denom().clone());
    let (num, den): (i64, i64) = (num.try_into().unwrap(), den.try_into().unwrap());
    let kd = -k * num / den;
    let s = qi(k) / (qi(kd) - qi(f.delta));
    let mut n = Q::one();
    for ai in a {
        let ai = ai as i64;
        let ceil = (ai * num + den - 1) / den;
        n *= product((1..ceil).map(|j| (qi(-ai) + qi(j) * &s) * &ta));
    }
    let top = -kd + f.delta_prime + f.delta_rho_prime;
    let mut dd = product((1..=top).map(|j| -(qi(j) * &s) * &ta));
    dd *= product((1..=num / den).map(|j| qi(j) * &s * &ta));
    dd *= product(others(hours, &[alpha]).map(|b| p.t(b) - &ta));
    n / dd
}

/// E11 edge of degree `d` from hour `alpha` to hour `beta`.
#[allow(clippy::too_many_arguments)]
pub fn e11(a: [u32; 5], k: i64, hours: u32, alpha: u32, beta: u32, d: i64, f: DeltaFlags, shifted: bool, p: &Point) -> Q {
    let (ta, tb) = (p.t(alpha), p.t(beta));
    let fact = product((1..=d).map(qi));
    let sign = if d % 2 == 0 { Q::one() } else { -Q::one() };
    let lead = sign * product((0..2 * d).map(|_| qi(d))) / (&fact * &fact) / product((0..2 * d).map(|_| &tb - &ta));
    let s = f.delta + f.delta_rho;
    let sp = f.delta_prime + f.delta_rho_prime;
    let shift = if shifted { q(s, d) * &ta } else { Q::zero() };
    let n = product((1 + sp..=k * d - 1 - s).map(|j| qi(k) * &ta - &shift - q(j, d) * (&ta - &tb)));
    let mut den = Q::one();
    for ai in a {
        let m = ai as i64 * d;
        den *= product((0..=m).map(|x| -(q(x, d) * &ta) - q(m - x, d) * &tb));
    }
    for g in others(hours, &[alpha, beta]) {
        den *= product((0..=d).map(|x| p.t(g) - q(x, d) * &ta - q(d - x, d) * &tb));
    }
    lead * n / den
}

pub fn node_level_zero(hours: u32, p: &Point) -> Q {
    product((1..=hours).map(|a| &p.h + p.t(a)))
}

pub fn node_level_one(a: [u32; 5], k: i64, hours: u32, alpha: u32, p: &Point) -> Q {
    let ta = p.t(alpha);
    let pa: i64 = a.iter().map(|&x| x as i64).product();
    qi(-k * pa) * product((0..6).map(|_| ta.clone())) * product(others(hours, &[alpha]).map(|b| &ta - p.t(b)))
}

pub fn node_level_inf(hours: u32, alpha: u32, p: &Point) -> Q {
    product(others(hours, &[alpha]).map(|b| p.t(b) - p.t(alpha)))
}

/// Tangent weight at the level-0 end of an E01 edge.
pub fn tangent_e01_zero(d: &Q, alpha: u32, p: &Point) -> Q {
    (&p.h + p.t(alpha)) / d
}

/// Tangent weights `(infinity end, level-1 end)` of an E1Inf edge with
/// `dL = d` and stacky order `ke` at infinity.
pub fn tangent_e1inf(k: i64, d: &Q, ke: i64, inf_is_v01: bool, alpha: u32, p: &Point) -> (Q, Q) {
    let ta = p.t(alpha);
    if inf_is_v01 {
        let w = qi(k) * &ta / (qi(k) * d + qi(1));
        (w.clone(), -w)
    } else {
        (&ta / (qi(ke) * d), -(&ta / d))
    }
}

fn euler_dual(lambda: &[Q], x: &Q) -> Q {
    let g = lambda.len() - 1;
    (0..=g).map(|i| if i % 2 == 0 { qi(1) } else { qi(-1) } * &lambda[i] * x.pow((g - i) as i32)).sum()
}

fn euler(lambda: &[Q], x: &Q) -> Q {
    let g = lambda.len() - 1;
    (0..=g).map(|i| &lambda[i] * x.pow((g - i) as i32)).sum()
}

/// Stable level-1 vertex with `n_edges` incident edges; genus is read off
/// the number of λ values in the point.
pub fn level_one_vertex(a: [u32; 5], k: i64, hours: u32, alpha: u32, n_edges: u32, p: &Point) -> Q {
    let ta = p.t(alpha);
    let l = &p.lambda;
    let mut out = Q::one();
    for ai in a {
        let x = qi(-(ai as i64)) * &ta;
        out *= euler_dual(l, &x) / x;
    }
    let kt = qi(k) * &ta;
    out *= &kt / (euler(l, &kt) * kt.pow(n_edges as i32));
    for b in others(hours, &[alpha]) {
        let x = p.t(b) - &ta;
        out *= euler_dual(l, &x) / x;
    }
    out
}
