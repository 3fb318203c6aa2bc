use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::sync::{Arc, Mutex};

use crate::algebra::{Monomial, RatFunc, Variable, Q};

use super::assemble::{GraphContribution, Site, SiteKind};
use super::series::Series;
use super::EvalError;

/// One integral over a site: the site key, the sorted ψ exponents of its
/// marked points, and the remaining class monomial (`1`, `H^j`, or a product
/// of `lambda<i>^e`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CorrelatorQuery {
    pub key: String,
    pub psi: Vec<u32>,
    pub classes: String,
}

impl fmt::Display for CorrelatorQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let psi: Vec<String> = self.psi.iter().map(|p| p.to_string()).collect();
        write!(f, "{} psi=[{}] classes={}", self.key, psi.join(" "), self.classes)
    }
}

/// Source of tabulated correlator values.
pub trait TableSource: Send + Sync {
    fn lookup(&self, query: &CorrelatorQuery) -> Option<Q>;

    /// Whether lookups may run concurrently; serial sources are called from
    /// one thread only.
    fn concurrent(&self) -> bool {
        true
    }
}

#[derive(Clone)]
pub enum CorrelatorOracle {
    /// Leave every correlator as a token.
    Symbolic,
    /// Every correlator is zero.
    Zero,
    /// Values from a table; a missing entry is an error.
    Tabulated(Arc<dyn TableSource>),
}

impl fmt::Debug for CorrelatorOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrelatorOracle::Symbolic => f.write_str("Symbolic"),
            CorrelatorOracle::Zero => f.write_str("Zero"),
            CorrelatorOracle::Tabulated(_) => f.write_str("Tabulated"),
        }
    }
}

/// Rows `key,psi,classes,value` with `psi` space separated and `value` as
/// `p/q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrelatorTable {
    rows: BTreeMap<CorrelatorQuery, Q>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct Row {
    key: String,
    psi: String,
    classes: String,
    value: String,
}

impl CorrelatorTable {
    pub fn insert(&mut self, query: CorrelatorQuery, value: Q) {
        self.rows.insert(query, value);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn read_csv(r: impl Read) -> Result<Self, String> {
        let mut table = CorrelatorTable::default();
        for (i, row) in csv::Reader::from_reader(r).deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| format!("row {}: {e}", i + 1))?;
            let psi = row
                .psi
                .split_whitespace()
                .map(|p| p.parse::<u32>().map_err(|e| format!("row {}: psi: {e}", i + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            let value: Q = row.value.trim().parse().map_err(|e| format!("row {}: value: {e}", i + 1))?;
            table.insert(CorrelatorQuery { key: row.key, psi, classes: row.classes }, value);
        }
        Ok(table)
    }

    pub fn write_csv(&self, w: impl Write) -> Result<(), String> {
        let mut out = csv::Writer::from_writer(w);
        for (q, v) in &self.rows {
            let psi: Vec<String> = q.psi.iter().map(|p| p.to_string()).collect();
            out.serialize(Row { key: q.key.clone(), psi: psi.join(" "), classes: q.classes.clone(), value: v.to_string() })
                .map_err(|e| e.to_string())?;
        }
        out.flush().map_err(|e| e.to_string())
    }
}

impl TableSource for CorrelatorTable {
    fn lookup(&self, query: &CorrelatorQuery) -> Option<Q> {
        self.rows.get(query).cloned()
    }
}

/// Records every query and answers from a fallback function; useful for
/// discovering the table a graph needs.
pub struct RecordingSource<F> {
    pub seen: Mutex<Vec<CorrelatorQuery>>,
    answer: F,
}

impl<F: Fn(&CorrelatorQuery) -> Option<Q> + Send + Sync> RecordingSource<F> {
    pub fn new(answer: F) -> Self {
        RecordingSource { seen: Mutex::new(Vec::new()), answer }
    }
}

impl<F: Fn(&CorrelatorQuery) -> Option<Q> + Send + Sync> TableSource for RecordingSource<F> {
    fn lookup(&self, query: &CorrelatorQuery) -> Option<Q> {
        self.seen.lock().unwrap().push(query.clone());
        (self.answer)(query)
    }
}

fn is_nilpotent(v: &Variable) -> bool {
    matches!(v, Variable::Psi(..) | Variable::Lambda(..) | Variable::Hyperplane(_))
}

struct SiteMap<'a> {
    sites: &'a [Site],
    owner: HashMap<Variable, usize>,
}

impl<'a> SiteMap<'a> {
    fn new(sites: &'a [Site]) -> Self {
        let mut owner = HashMap::new();
        for (i, s) in sites.iter().enumerate() {
            for v in s.psi.iter().chain(&s.hyperplanes) {
                owner.insert(v.clone(), i);
            }
        }
        SiteMap { sites, owner }
    }

    fn site_of(&self, v: &Variable) -> Option<usize> {
        if let Variable::Lambda(vx, _) = v {
            return self
                .sites
                .iter()
                .position(|s| s.kind == SiteKind::LevelOne(*vx as usize));
        }
        self.owner.get(v).copied()
    }

    /// Per-site `(weighted degree, hyperplane degree)`.
    fn degrees(&self, m: &Monomial) -> Option<Vec<(u32, u32)>> {
        let mut out = vec![(0u32, 0u32); self.sites.len()];
        for (v, e) in m.factors() {
            let i = self.site_of(v)?;
            let w = v.standard_degree() as u32 * e;
            out[i].0 += w;
            if matches!(v, Variable::Hyperplane(_)) {
                out[i].1 += e;
            }
        }
        Some(out)
    }

    fn keep(&self, m: &Monomial) -> bool {
        match self.degrees(m) {
            None => true,
            Some(d) => self.sites.iter().zip(d).all(|(s, (w, hdeg))| w <= s.cap && hdeg <= 3),
        }
    }
}

fn site_query(site: &Site, m: &Monomial) -> CorrelatorQuery {
    let mut psi: Vec<u32> = site.psi.iter().map(|v| m.exponent(v)).collect();
    psi.extend(std::iter::repeat_n(0, site.extra_points));
    psi.sort_unstable_by(|a, b| b.cmp(a));
    let mut classes: Vec<String> = Vec::new();
    let h: u32 = site.hyperplanes.iter().map(|v| m.exponent(v)).sum();
    if h > 0 {
        classes.push(if h == 1 { "H".to_string() } else { format!("H^{h}") });
    }
    if let SiteKind::LevelOne(vx) = site.kind {
        for (v, e) in m.factors() {
            if let Variable::Lambda(owner, i) = v {
                if *owner as usize == vx {
                    classes.push(if *e == 1 { format!("lambda{i}") } else { format!("lambda{i}^{e}") });
                }
            }
        }
    }
    let classes = if classes.is_empty() { "1".to_string() } else { classes.join("*") };
    CorrelatorQuery { key: site.key.clone(), psi, classes }
}

/// Integrate every site of `c` against a table, returning the resolved
/// rational function of the equivariant parameters (prefactor and sign
/// included).
pub fn resolve_contribution(c: &GraphContribution, source: &dyn TableSource) -> Result<RatFunc, EvalError> {
    let sites = SiteMap::new(&c.sites);
    let mut subst: BTreeMap<Variable, RatFunc> = BTreeMap::new();
    for s in &c.sites {
        for tok in &s.tokens {
            subst.insert(tok.clone(), RatFunc::one());
        }
        if let Some((first, rest)) = s.hyperplanes.split_first() {
            for h in rest {
                subst.insert(h.clone(), RatFunc::var(first.clone()));
            }
        }
    }
    let canonical_sites: Vec<Site> = c
        .sites
        .iter()
        .map(|s| Site { hyperplanes: s.hyperplanes.iter().take(1).cloned().collect(), ..s.clone() })
        .collect();
    let keep = |m: &Monomial| sites.keep(m);
    let mut series = Series::one();
    for f in &c.factors {
        let value = f.value.substitute(&subst)?;
        let s = Series::expand(&value, &is_nilpotent, &keep)?;
        series = series.mul(&s, &keep);
    }
    let mut cache: HashMap<CorrelatorQuery, Q> = HashMap::new();
    let mut total = RatFunc::zero();
    'terms: for (m, coeff) in series.terms() {
        let degrees = sites
            .degrees(m)
            .ok_or_else(|| EvalError::MissingCorrelator(format!("class {m} belongs to no site")))?;
        let mut value = Q::from_integer(1.into());
        for (site, (w, _)) in canonical_sites.iter().zip(degrees) {
            if site.exact && w != site.cap {
                continue 'terms;
            }
            let query = site_query(site, m);
            let v = match cache.get(&query) {
                Some(v) => v.clone(),
                None => {
                    let v = source.lookup(&query).ok_or_else(|| EvalError::MissingCorrelator(query.to_string()))?;
                    cache.insert(query, v.clone());
                    v
                }
            };
            value *= v;
        }
        total = total + coeff.scale(&value);
    }
    let leftover: Vec<Variable> = total.variables().into_iter().filter(|v| !matches!(v, Variable::EquivParam(_))).collect();
    if !leftover.is_empty() {
        return Err(EvalError::MissingCorrelator(format!("unresolved classes {leftover:?}")));
    }
    Ok(total.scale(&(&c.prefactor * Q::from_integer(c.fixed.sign.into()))))
}
