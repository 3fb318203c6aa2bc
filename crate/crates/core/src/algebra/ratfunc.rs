use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{Monomial, Polynomial, Q};
use super::variable::Variable;
use super::AlgebraError;

/// Quotient of two polynomials with a nonzero, monic denominator.
///
/// Common factors are only cancelled opportunistically (monomial content and
/// exact divisibility); equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

/// Apply `op`; unary operations ignore `rhs`.
pub fn rat_arith(lhs: &RatFunc, rhs: &RatFunc, op: ArithOp) -> Result<RatFunc, AlgebraError> {
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
        ArithOp::Div => lhs.div(rhs)?,
        ArithOp::Neg => -lhs,
        ArithOp::Inv => lhs.inv()?,
    })
}

impl RatFunc {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Polynomial::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::from_poly(Polynomial::int(n))
    }

    pub fn var(v: Variable) -> Self {
        Self::from_poly(Polynomial::var(v))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RatFunc {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Q> {
        Some(self.num.constant_value()? / self.den.constant_value()?)
    }

    fn normalized(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let lc = den.leading_term().unwrap().1.clone();
        let (mut num, mut den) = if lc.is_one() {
            (num, den)
        } else {
            let inv = lc.recip();
            (num.scale(&inv), den.scale(&inv))
        };
        let common = num.monomial_content().gcd(&den.monomial_content());
        if !common.is_one() {
            num = num.div_monomial(&common).unwrap();
            den = den.div_monomial(&common).unwrap();
        }
        if den.is_one() {
            return RatFunc { num, den };
        }
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: Polynomial::one(),
            };
        }
        if num.len() >= den.len() {
            if let Some(quot) = num.div_exact(&den) {
                return RatFunc {
                    num: quot,
                    den: Polynomial::one(),
                };
            }
        } else if num.constant_value().is_none() {
            if let Some(quot) = den.div_exact(&num) {
                let lc = quot.leading_term().unwrap().1.clone().recip();
                return RatFunc {
                    num: Polynomial::constant(lc.clone()),
                    den: quot.scale(&lc),
                };
            }
        }
        RatFunc { num, den }
    }

    pub fn inv(&self) -> Result<RatFunc, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<RatFunc, AlgebraError> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inv()?.pow((-e) as u32))
        }
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs.sort();
        vs.dedup();
        vs
    }

    /// Substitute bound variables by rational functions; unbound variables
    /// pass through unchanged.
    pub fn substitute(&self, bindings: &BTreeMap<Variable, RatFunc>) -> Result<RatFunc, AlgebraError> {
        let num = substitute_poly(&self.num, bindings);
        let den = substitute_poly(&self.den, bindings);
        if den.is_zero() {
            return Err(AlgebraError::DenominatorVanishes);
        }
        num.div(&den)
    }

    /// `deg(num) - deg(den)` when both parts are homogeneous under `grading`.
    /// The zero function has no degree.
    pub fn homogeneous_degree(&self, grading: &impl Fn(&Variable) -> i64) -> Option<i64> {
        Some(self.num.homogeneous_degree(grading)? - self.den.homogeneous_degree(grading)?)
    }
}

/// `homogeneous_degree` as a free function over an explicit grading map.
/// Variables missing from the map have degree 0.
pub fn homogeneous_degree(f: &RatFunc, grading: &BTreeMap<Variable, i64>) -> Option<i64> {
    f.homogeneous_degree(&|v: &Variable| grading.get(v).copied().unwrap_or(0))
}

pub fn standard_grading(v: &Variable) -> i64 {
    v.standard_degree()
}

fn substitute_poly(p: &Polynomial, bindings: &BTreeMap<Variable, RatFunc>) -> RatFunc {
    let mut powers: BTreeMap<(Variable, u32), RatFunc> = BTreeMap::new();
    // accumulate over a common denominator per distinct denominator product
    let mut acc = RatFunc::zero();
    let mut poly_part = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut free = Vec::new();
        let mut bound = RatFunc::one();
        let mut has_bound = false;
        for (v, e) in m.factors() {
            match bindings.get(v) {
                Some(val) => {
                    has_bound = true;
                    let key = (v.clone(), *e);
                    let pw = powers.entry(key).or_insert_with(|| val.pow(*e)).clone();
                    bound = &bound * &pw;
                }
                None => free.push((v.clone(), *e)),
            }
        }
        let rest = Polynomial::monomial(Monomial::from_pairs(free), c.clone());
        if has_bound {
            acc = &acc + &(&bound * &RatFunc::from_poly(rest));
        } else {
            poly_part = &poly_part + &rest;
        }
    }
    &acc + &RatFunc::from_poly(poly_part)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl From<Polynomial> for RatFunc {
    fn from(p: Polynomial) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Variable> for RatFunc {
    fn from(v: Variable) -> Self {
        RatFunc::var(v)
    }
}

impl From<Q> for RatFunc {
    fn from(c: Q) -> Self {
        RatFunc::constant(c)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        // A denominator dividing the other one is a common denominator.
        if let Some(q) = rhs.den.div_exact(&self.den) {
            return RatFunc::normalized(&(&self.num * &q) + &rhs.num, rhs.den.clone());
        }
        if let Some(q) = self.den.div_exact(&rhs.den) {
            return RatFunc::normalized(&self.num + &(&rhs.num * &q), self.den.clone());
        }
        RatFunc::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl std::iter::Product for RatFunc {
    fn product<I: Iterator<Item = RatFunc>>(iter: I) -> RatFunc {
        iter.fold(RatFunc::one(), |a, b| &a * &b)
    }
}

impl std::iter::Sum for RatFunc {
    fn sum<I: Iterator<Item = RatFunc>>(iter: I) -> RatFunc {
        iter.fold(RatFunc::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for RatFunc {
    /// `num` when the denominator is 1, otherwise `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }

    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::one()
    }
}
