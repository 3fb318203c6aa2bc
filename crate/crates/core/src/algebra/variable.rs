use std::fmt;
use std::sync::Arc;

/// A formal variable of the localization ring.
///
/// The derived ordering is the fixed total order used by the monomial order:
/// equivariant parameters first, then hyperplane classes, psi classes, lambda
/// classes and finally opaque correlator tokens, each block sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    /// `t_α`, 1-based.
    EquivParam(u32),
    /// `h_e` for the edge with the given id.
    Hyperplane(u32),
    /// `ψ_(e,v)` for the flag (edge id, vertex id).
    Psi(u32, u32),
    /// `λ_{v,i}` for vertex id `v` and index `i >= 1`.
    Lambda(u32, u32),
    /// Opaque correlator token; the name must match `[A-Za-z0-9_]+`.
    Token(Arc<str>),
}

impl Variable {
    pub fn t(alpha: u32) -> Self {
        Variable::EquivParam(alpha)
    }

    pub fn h(edge: u32) -> Self {
        Variable::Hyperplane(edge)
    }

    pub fn psi(edge: u32, vertex: u32) -> Self {
        Variable::Psi(edge, vertex)
    }

    pub fn lambda(vertex: u32, index: u32) -> Self {
        assert!(index >= 1, "lambda index starts at 1");
        Variable::Lambda(vertex, index)
    }

    pub fn token(name: &str) -> Self {
        assert!(
            is_token_name(name),
            "token names are restricted to [A-Za-z0-9_]+, got {name:?}"
        );
        Variable::Token(Arc::from(name))
    }

    pub fn is_token(&self) -> bool {
        matches!(self, Variable::Token(_))
    }

    /// Degree under the standard grading: `t`, `h`, `ψ` have degree 1,
    /// `λ_i` has degree `i`, tokens degree 0.
    pub fn standard_degree(&self) -> i64 {
        match self {
            Variable::EquivParam(_) | Variable::Hyperplane(_) | Variable::Psi(..) => 1,
            Variable::Lambda(_, i) => *i as i64,
            Variable::Token(_) => 0,
        }
    }
}

pub(crate) fn is_token_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::EquivParam(a) => write!(f, "t{a}"),
            Variable::Hyperplane(e) => write!(f, "h{e}"),
            Variable::Psi(e, v) => write!(f, "psi{e}_{v}"),
            Variable::Lambda(v, i) => write!(f, "lambda{v}_{i}"),
            Variable::Token(name) => write!(f, "@{name}"),
        }
    }
}
