//! Exact multivariate polynomial and rational-function arithmetic over Q.

pub mod hodge;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod variable;

pub use hodge::hodge_euler;
pub use parse::parse_ratfunc;
pub use poly::{q, qi, Monomial, Polynomial, Q};
pub use ratfunc::{homogeneous_degree, rat_arith, standard_grading, ArithOp, RatFunc};
pub use variable::Variable;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator vanishes under substitution")]
    DenominatorVanishes,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
