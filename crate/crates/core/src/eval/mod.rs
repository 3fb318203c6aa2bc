//! Per-graph localization contributions as exact rational functions.

mod assemble;
mod formulas;
mod oracle;
mod series;
mod sum;

use std::fmt;
use std::sync::Arc;

pub use assemble::{assemble_graph, webs, Factor, FactorKind, FixedPart, GraphContribution, Site, SiteKind};
pub use formulas::{
    delta_flags, e01_factor, e11_factor, e1inf_factor, edge_contribution, edge_contribution_with,
    flag_factor, level_one_vertex_factor, node_contribution, oriented_ends, tangent_weight,
    vertex_contribution,
};
pub use oracle::{
    resolve_contribution, CorrelatorOracle, CorrelatorQuery, CorrelatorTable, RecordingSource, TableSource,
};
pub use series::Series;
pub use sum::{sum_graphs, LedgerEntry, SumReport};

use crate::algebra::{AlgebraError, Q};
use crate::graph::{DefaultEdgeGroup, EdgeGroupPolicy, EdgeId, EdgeType, GraphError, VertexId};
use crate::model::WeightSystem;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("edge {0} of type {1} has no explicit contribution")]
    UnsupportedEdgeType(EdgeId, EdgeType),
    #[error("infinity node at flag ({0}, {1}) is not narrow")]
    BroadInfinityNode(EdgeId, VertexId),
    #[error("edge {0} degree {1} is not an integer")]
    NonIntegralDegree(EdgeId, Q),
    #[error("graph is not a regular flat graph")]
    NotRegular,
    #[error("graph fails validation: {0}")]
    Invalid(String),
    #[error("no correlator value for {0}")]
    MissingCorrelator(String),
    #[error("graphs {0} and {1} are isomorphic")]
    DuplicateClass(usize, usize),
}

/// The four signed shifts `(δ, δ', δ_ρ, δ'_ρ)`, each 0 or -1. Unprimed flags
/// belong to the non-level-1 end (or the second end of an E11 edge), primed
/// flags to the level-1 end (the first end of an E11 edge).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DeltaFlags {
    pub delta: i64,
    pub delta_prime: i64,
    pub delta_rho: i64,
    pub delta_rho_prime: i64,
}

impl DeltaFlags {
    /// All sixteen sign patterns.
    pub fn all() -> impl Iterator<Item = DeltaFlags> {
        (0..16u8).map(|m| {
            let bit = |i: u8| -i64::from((m >> i) & 1);
            DeltaFlags { delta: bit(0), delta_prime: bit(1), delta_rho: bit(2), delta_rho_prime: bit(3) }
        })
    }

    pub fn swapped(self) -> DeltaFlags {
        DeltaFlags {
            delta: self.delta_prime,
            delta_prime: self.delta,
            delta_rho: self.delta_rho_prime,
            delta_rho_prime: self.delta_rho,
        }
    }
}

/// Index range of the ρ-obstruction product on E01 edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum E01Range {
    /// `1 ..= k d - 1 - δ' - δ'_ρ`.
    #[default]
    Final,
    /// `1 + δ + δ_ρ ..= k d - 1 - δ - δ'_ρ`.
    Cohomology,
}

/// Form of the ρ-obstruction factors on E11 edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum E11Form {
    /// Factors `k t_α - j (t_α - t_β)/d`; invariant under reversing the edge.
    #[default]
    Symmetric,
    /// Adds the extra `-(δ+δ_ρ)/d · t_α` shift to every factor.
    Shifted,
}

/// How the ρ-shifts are read off the graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoDeltaRule {
    /// `δ_ρ = δ` and `δ'_ρ = δ'`: -1 at a smooth contracted end.
    #[default]
    SameAsDelta,
    /// -1 at a contracted end that carries a ρ-unit marking.
    RhoMarking,
}

/// Order of the stacky point at the infinity end of an E1Inf edge.
pub trait StackyOrderPolicy: Send + Sync {
    fn order(&self, d_l: &Q) -> i64;
}

/// The least positive `r` with `r · dL` integral.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultStackyOrder;

impl StackyOrderPolicy for DefaultStackyOrder {
    fn order(&self, d_l: &Q) -> i64 {
        use num_traits::ToPrimitive;
        d_l.denom().to_i64().unwrap_or(i64::MAX)
    }
}

#[derive(Clone)]
pub struct EvalOptions {
    pub e01_range: E01Range,
    pub e11_form: E11Form,
    pub rho_delta: RhoDeltaRule,
    pub stacky_order: Arc<dyn StackyOrderPolicy>,
    pub edge_group: Arc<dyn EdgeGroupPolicy>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            e01_range: E01Range::default(),
            e11_form: E11Form::default(),
            rho_delta: RhoDeltaRule::default(),
            stacky_order: Arc::new(DefaultStackyOrder),
            edge_group: Arc::new(DefaultEdgeGroup),
        }
    }
}

impl fmt::Debug for EvalOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvalOptions")
            .field("e01_range", &self.e01_range)
            .field("e11_form", &self.e11_form)
            .field("rho_delta", &self.rho_delta)
            .finish_non_exhaustive()
    }
}

/// Everything the formulas need besides the graph.
#[derive(Clone, Debug)]
pub struct EvalContext {
    pub ws: WeightSystem,
    /// Number of hours `N`.
    pub hours: u32,
    pub options: EvalOptions,
}

impl EvalContext {
    pub fn new(ws: WeightSystem, hours: u32) -> Self {
        EvalContext { ws, hours, options: EvalOptions::default() }
    }

    pub fn with_options(mut self, options: EvalOptions) -> Self {
        self.options = options;
        self
    }
}
