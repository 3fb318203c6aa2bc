use std::collections::BTreeMap;

use crate::algebra::{AlgebraError, Monomial, Polynomial, RatFunc, Variable};

/// Truncated power series in a set of nilpotent variables with rational
/// function coefficients in the remaining ones.
///
/// `keep` decides which monomials survive truncation; it must be closed under
/// taking divisors, so a rejected monomial never divides a kept one.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    terms: BTreeMap<Monomial, RatFunc>,
}

type Keep<'a> = &'a dyn Fn(&Monomial) -> bool;
type Nilpotent<'a> = &'a dyn Fn(&Variable) -> bool;

fn split_poly(p: &Polynomial, nil: Nilpotent) -> BTreeMap<Monomial, Polynomial> {
    let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (n, rest): (Vec<_>, Vec<_>) = m.factors().iter().cloned().partition(|(v, _)| nil(v));
        let term = Polynomial::monomial(Monomial::from_pairs(rest), c.clone());
        let slot = out.entry(Monomial::from_pairs(n)).or_insert_with(Polynomial::zero);
        *slot = &*slot + &term;
    }
    out
}

impl Series {
    pub fn one() -> Self {
        Series { terms: BTreeMap::from([(Monomial::one(), RatFunc::one())]) }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFunc)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_poly(p: &Polynomial, nil: Nilpotent, keep: Keep) -> Self {
        let terms = split_poly(p, nil)
            .into_iter()
            .filter(|(m, c)| keep(m) && !c.is_zero())
            .map(|(m, c)| (m, RatFunc::from_poly(c)))
            .collect();
        Series { terms }
    }

    pub fn mul(&self, other: &Series, keep: Keep) -> Series {
        let mut terms: BTreeMap<Monomial, RatFunc> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if !keep(&m) {
                    continue;
                }
                let slot = terms.entry(m).or_insert_with(RatFunc::zero);
                *slot = &*slot + &(c1 * c2);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Series { terms }
    }

    /// Expansion of `f`; fails when the denominator has no term free of the
    /// nilpotent variables.
    pub fn expand(f: &RatFunc, nil: Nilpotent, keep: Keep) -> Result<Series, AlgebraError> {
        let num = Series::from_poly(f.numer(), nil, keep);
        let mut den = Series::from_poly(f.denom(), nil, &|_| true);
        let d0 = den.terms.remove(&Monomial::one()).ok_or(AlgebraError::DenominatorVanishes)?;
        let inv0 = d0.inv()?;
        // 1/(d0 + r) = inv0 * sum_j (-r * inv0)^j
        let step = Series {
            terms: den
                .terms
                .into_iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m, -(c * inv0.clone())))
                .collect(),
        };
        let mut inv = Series::one();
        let mut power = Series::one();
        loop {
            power = power.mul(&step, keep);
            if power.is_zero() {
                break;
            }
            for (m, c) in &power.terms {
                let slot = inv.terms.entry(m.clone()).or_insert_with(RatFunc::zero);
                *slot = &*slot + c;
            }
        }
        inv.terms.retain(|_, c| !c.is_zero());
        let scaled = Series { terms: inv.terms.into_iter().map(|(m, c)| (m, c * inv0.clone())).collect() };
        Ok(num.mul(&scaled, keep))
    }
}
