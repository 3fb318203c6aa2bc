//! Weight systems, markings and discrete data of the moduli problem.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::algebra::{qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("weights {0:?} fail the divisibility condition a_i | sum(a)")]
    NotFermat([u32; 5]),
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("unknown weight preset {0:?}")]
    UnknownPreset(String),
    #[error("marking {index} (narrow:{m}) is not narrow for k={k}")]
    InvalidMarking { index: usize, m: u32, k: u32 },
    #[error("degree {value} is not a multiple of 1/{k}")]
    BadDegree { value: String, k: u32 },
    #[error("number of hours must be positive")]
    NoHours,
    #[error("cannot parse marking {0:?}; expected \"rho\" or \"narrow:<m>\"")]
    MarkingSyntax(String),
}

/// Five positive weights `a` with `a_i | k = sum(a)` and `b_i = k / a_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    a: [u32; 5],
    k: u32,
    b: [u32; 5],
}

/// Named weight systems; the first three are the supported targets, the
/// last is kept for cross-checks only.
pub const PRESETS: [(&str, [u32; 5]); 4] = [
    ("11112", [1, 1, 1, 1, 2]),
    ("11114", [1, 1, 1, 1, 4]),
    ("11125", [1, 1, 1, 2, 5]),
    ("11111", [1, 1, 1, 1, 1]),
];

impl WeightSystem {
    pub fn new(a: [u32; 5]) -> Result<Self, ModelError> {
        if a.contains(&0) {
            return Err(ModelError::NonPositiveWeight);
        }
        let k: u32 = a.iter().sum();
        if a.iter().any(|ai| !k.is_multiple_of(*ai)) {
            return Err(ModelError::NotFermat(a));
        }
        Ok(WeightSystem { a, k, b: a.map(|ai| k / ai) })
    }

    pub fn preset(name: &str) -> Result<Self, ModelError> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, a)| Self::new(*a).unwrap())
            .ok_or_else(|| ModelError::UnknownPreset(name.to_string()))
    }

    pub fn a(&self) -> [u32; 5] {
        self.a
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn b(&self) -> [u32; 5] {
        self.b
    }

    /// The quintic weights are accepted but are not one of the supported
    /// targets.
    pub fn is_cross_check_only(&self) -> bool {
        self.a == [1, 1, 1, 1, 1]
    }

    /// `m * a_i` is nonzero mod k for every i.
    pub fn is_narrow_sector(&self, m: u32) -> bool {
        !m.is_multiple_of(self.k) && self.a.iter().all(|ai| !(m * ai).is_multiple_of(self.k))
    }

    pub fn narrow_sectors(&self) -> Vec<u32> {
        (1..self.k).filter(|&m| self.is_narrow_sector(m)).collect()
    }

    /// Whether `d` lies in `(1/k)Z`.
    pub fn admits_degree(&self, d: &Q) -> bool {
        (d * qi(self.k as i64)).is_integer()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.a;
        write!(f, "({},{},{},{},{})", a[0], a[1], a[2], a[3], a[4])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marking {
    /// The unit sector decorated by the P-field.
    RhoUnit,
    /// The sector `zeta_k^m`.
    Narrow(u32),
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marking::RhoUnit => write!(f, "rho"),
            Marking::Narrow(m) => write!(f, "narrow:{m}"),
        }
    }
}

impl FromStr for Marking {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "rho" {
            return Ok(Marking::RhoUnit);
        }
        s.strip_prefix("narrow:")
            .and_then(|m| m.trim().parse().ok())
            .map(Marking::Narrow)
            .ok_or_else(|| ModelError::MarkingSyntax(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MarkingClass {
    RhoUnit,
    Narrow,
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarrowReport {
    /// Every `Narrow(m)` marking lies in the narrow sector.
    pub narrow: bool,
    pub stacky_insertions: usize,
    pub markings: Vec<MarkingClass>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteData {
    pub genus: u32,
    pub markings: Vec<Marking>,
    pub d0: Q,
    pub dinf: Q,
    pub hours: u32,
}

impl DiscreteData {
    /// Checks degrees and hours; marking validity is reported separately by
    /// [`is_narrow`] and enforced by [`DiscreteData::validate`].
    pub fn new(
        ws: &WeightSystem,
        genus: u32,
        markings: Vec<Marking>,
        d0: Q,
        dinf: Q,
        hours: u32,
    ) -> Result<Self, ModelError> {
        let dd = DiscreteData { genus, markings, d0, dinf, hours };
        dd.check_degrees(ws)?;
        Ok(dd)
    }

    fn check_degrees(&self, ws: &WeightSystem) -> Result<(), ModelError> {
        if self.hours == 0 {
            return Err(ModelError::NoHours);
        }
        for d in [&self.d0, &self.dinf] {
            if !ws.admits_degree(d) {
                return Err(ModelError::BadDegree { value: d.to_string(), k: ws.k() });
            }
        }
        Ok(())
    }

    pub fn validate(&self, ws: &WeightSystem) -> Result<(), ModelError> {
        self.check_degrees(ws)?;
        for (index, mk) in self.markings.iter().enumerate() {
            if let Marking::Narrow(m) = *mk {
                if !ws.is_narrow_sector(m) || m >= ws.k() {
                    return Err(ModelError::InvalidMarking { index, m, k: ws.k() });
                }
            }
        }
        Ok(())
    }

    pub fn num_markings(&self) -> usize {
        self.markings.len()
    }
}

pub fn virtual_dimension(ws: &WeightSystem, dd: &DiscreteData) -> Result<Q, ModelError> {
    dd.validate(ws)?;
    let n = qi(dd.hours as i64);
    let mut vd = &n * &dd.d0 + &n * (Q::one() - qi(dd.genus as i64)) + &dd.dinf;
    vd += qi(dd.markings.len() as i64);
    for mk in &dd.markings {
        if let Marking::Narrow(m) = mk {
            vd -= Q::new((4 * m).into(), ws.k().into());
        }
    }
    Ok(vd)
}

/// `sum_i b_i rho phi_i^(b_i-1) phidot_i + rhodot sum_i phi_i^(b_i)`.
pub fn cosection_pairing(
    ws: &WeightSystem,
    phi: &[Q; 5],
    rho: &Q,
    phidot: &[Q; 5],
    rhodot: &Q,
) -> Q {
    let mut first = Q::zero();
    let mut second = Q::zero();
    for i in 0..5 {
        let b = ws.b[i];
        first += qi(b as i64) * num_traits::pow(phi[i].clone(), (b - 1) as usize) * &phidot[i];
        second += num_traits::pow(phi[i].clone(), b as usize);
    }
    rho * first + rhodot * second
}

pub fn is_narrow(ws: &WeightSystem, dd: &DiscreteData) -> NarrowReport {
    let markings: Vec<_> = dd
        .markings
        .iter()
        .map(|mk| match *mk {
            Marking::RhoUnit => MarkingClass::RhoUnit,
            Marking::Narrow(m) if m < ws.k() && ws.is_narrow_sector(m) => MarkingClass::Narrow,
            Marking::Narrow(_) => MarkingClass::Invalid,
        })
        .collect();
    NarrowReport {
        narrow: !markings.contains(&MarkingClass::Invalid),
        stacky_insertions: markings.iter().filter(|c| **c != MarkingClass::RhoUnit).count(),
        markings,
    }
}
