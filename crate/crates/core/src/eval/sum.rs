use std::collections::BTreeMap;

use rayon::prelude::*;

use super::assemble::{assemble_graph, GraphContribution, SiteKind};
use super::oracle::{resolve_contribution, CorrelatorOracle};
use super::{EvalContext, EvalError};
use crate::algebra::{RatFunc, Variable};
use crate::graph::{canonical_form, DecoratedGraph};
use crate::model::DiscreteData;

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub contribution: GraphContribution,
    /// `prefactor * sign * inverse_euler` with tokens left symbolic.
    pub term: RatFunc,
    /// The term after the oracle resolved it; absent in symbolic mode.
    pub resolved: Option<RatFunc>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SumReport {
    /// In canonical-form order.
    pub entries: Vec<LedgerEntry>,
    /// Sums of symbolic terms that share the same opaque classes.
    pub groups: Vec<(Vec<String>, RatFunc)>,
    /// Present unless some symbolic term still carries opaque classes.
    pub total: Option<RatFunc>,
}

fn token_names(c: &GraphContribution, term: &RatFunc) -> Vec<String> {
    let mut names: Vec<String> = c.fixed.tokens.clone();
    names.extend(term.variables().into_iter().filter(Variable::is_token).map(|v| v.to_string()));
    names.sort();
    names.dedup();
    names
}

/// Localization sum over the flat regular graphs of one configuration.
pub fn sum_graphs(
    ctx: &EvalContext,
    graphs: &[DecoratedGraph],
    dd: &DiscreteData,
    oracle: &CorrelatorOracle,
) -> Result<SumReport, EvalError> {
    let mut seen = BTreeMap::new();
    for (i, g) in graphs.iter().enumerate() {
        if let Some(j) = seen.insert(canonical_form(g), i) {
            return Err(EvalError::DuplicateClass(j, i));
        }
    }
    let mut contributions = graphs
        .par_iter()
        .map(|g| assemble_graph(ctx, g, dd))
        .collect::<Result<Vec<_>, _>>()?;
    contributions.sort_by(|a, b| a.canonical.cmp(&b.canonical));

    let resolve = |c: &GraphContribution| -> Result<Option<RatFunc>, EvalError> {
        match oracle {
            CorrelatorOracle::Symbolic => Ok(None),
            CorrelatorOracle::Zero => {
                let correlated = c.sites.iter().any(|s| !matches!(s.kind, SiteKind::Point(_)));
                Ok(Some(if correlated { RatFunc::zero() } else { c.term() }))
            }
            CorrelatorOracle::Tabulated(src) => resolve_contribution(c, src.as_ref()).map(Some),
        }
    };
    let resolved: Vec<Option<RatFunc>> = match oracle {
        CorrelatorOracle::Tabulated(src) if !src.concurrent() => {
            contributions.iter().map(resolve).collect::<Result<_, _>>()?
        }
        _ => contributions.par_iter().map(resolve).collect::<Result<_, _>>()?,
    };

    let mut groups: BTreeMap<Vec<String>, RatFunc> = BTreeMap::new();
    let mut entries = Vec::with_capacity(contributions.len());
    for (c, r) in contributions.into_iter().zip(resolved) {
        let term = c.term();
        let slot = groups.entry(token_names(&c, &term)).or_insert_with(RatFunc::zero);
        *slot = &*slot + &term;
        entries.push(LedgerEntry { contribution: c, term, resolved: r });
    }
    let total = match oracle {
        CorrelatorOracle::Symbolic => {
            if groups.keys().all(|k| k.is_empty()) {
                Some(groups.values().fold(RatFunc::zero(), |a, b| a + b.clone()))
            } else {
                None
            }
        }
        _ => Some(entries.iter().filter_map(|e| e.resolved.clone()).fold(RatFunc::zero(), |a, b| a + b)),
    };
    Ok(SumReport { entries, groups: groups.into_iter().collect(), total })
}
