use super::poly::{Polynomial, Q};
use super::variable::Variable;

/// Equivariant Euler class of the rank-`g` Hodge bundle (or its dual) at
/// vertex `vertex`, twisted by a line of weight `c`:
/// `sum_{i=0..g} s_i * lambda_{vertex,i} * c^(g-i)` with `lambda_0 = 1` and
/// `s_i = (-1)^i` for the dual bundle, `+1` otherwise.
pub fn hodge_euler(g: u32, c: &Polynomial, dual: bool, vertex: u32) -> Polynomial {
    let mut out = c.pow(g);
    for i in 1..=g {
        let lam = Polynomial::var(Variable::lambda(vertex, i));
        let mut term = &lam * &c.pow(g - i);
        if dual && i % 2 == 1 {
            term = term.scale(&Q::from_integer((-1).into()));
        }
        out = &out + &term;
    }
    out
}
