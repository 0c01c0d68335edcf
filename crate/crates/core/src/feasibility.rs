//! Feasibility constraints on protocol tables.
//!
//! [`check`] evaluates the six structural constraints exhaustively:
//!
//! | id | rule |
//! |----|------|
//! | E1 | sections are consecutive runs of units |
//! | E2 | `a_kni <= s_ki` |
//! | E3 | aligned sections are consecutive |
//! | E4 | `Σ_{n,m} a_kni u_kmn l_km <= d_i` |
//! | E5 | `v_kni <= a_kni` |
//! | E6 | `p_knij <= v_kni v_knj` |
//!
//! Presentation standards and end-of-line rules are separate checks. All
//! indices in a [`Violation`] are 0-based.

use std::collections::BTreeSet;
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::model::ProtocolSpec;
use crate::rational::{display_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConstraintId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    #[serde(rename = "PS_MIN")]
    PsMin,
    #[serde(rename = "PS_EXACT")]
    PsExact,
    #[serde(rename = "EOL")]
    Eol,
    Custom(String),
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintId::PsMin => f.write_str("PS_MIN"),
            ConstraintId::PsExact => f.write_str("PS_EXACT"),
            ConstraintId::Eol => f.write_str("EOL"),
            ConstraintId::Custom(name) => f.write_str(name),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Indices {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    /// Station index, for end-of-line rules.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    /// Endpoints of a broken run (units for E1, sections for E3).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: ConstraintId,
    pub at: Indices,
    pub detail: String,
}

impl Violation {
    pub fn key(&self) -> (ConstraintId, Indices) {
        (self.constraint.clone(), self.at.clone())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Self { feasible: violations.is_empty(), violations }
    }

    pub fn merge(mut self, other: FeasibilityReport) -> Self {
        self.violations.extend(other.violations);
        self.feasible = self.violations.is_empty();
        self
    }

    pub fn count(&self, id: &ConstraintId) -> usize {
        self.violations.iter().filter(|v| &v.constraint == id).count()
    }

    pub fn keys(&self) -> BTreeSet<(ConstraintId, Indices)> {
        self.violations.iter().map(Violation::key).collect()
    }
}

type CustomFn = dyn Fn(&ProtocolSpec) -> Vec<(Indices, String)> + Send + Sync;

/// Extra constraint supplied by the caller as a closure over the tables.
pub struct CustomConstraint {
    pub name: String,
    pub eval: Box<CustomFn>,
}

impl CustomConstraint {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&ProtocolSpec) -> Vec<(Indices, String)> + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), eval: Box::new(eval) }
    }
}

#[derive(Default)]
pub struct CheckOptions {
    pub custom: Vec<CustomConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresentationMode {
    AtLeastOne,
    ExactlyOne,
}

impl std::str::FromStr for PresentationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "at_least_one" => Ok(Self::AtLeastOne),
            "exactly_one" => Ok(Self::ExactlyOne),
            other => Err(format!("unknown presentation mode `{other}`")),
        }
    }
}

fn broken_runs(bits: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let set: Vec<usize> = (0..bits.len()).filter(|&x| bits[x]).collect();
    for (x, &lo) in set.iter().enumerate() {
        for &hi in &set[x + 1..] {
            if (lo..=hi).any(|m| !bits[m]) {
                out.push((lo, hi));
            }
        }
    }
    out
}

/// Evaluates E1..E6 plus any custom constraints.
pub fn check(spec: &ProtocolSpec, options: &CheckOptions) -> FeasibilityReport {
    let mut out = Vec::new();
    let c = spec.stations.len();
    let label = |i: usize| spec.stations.labels.get(i).map_or("?", String::as_str);
    for (k, train) in spec.trains.iter().enumerate() {
        let (units, sections) = (train.units, train.sections);

        for n in 0..sections {
            let bits: Vec<bool> = (0..units).map(|m| spec.u.at(k, m, n)).collect();
            for (lo, hi) in broken_runs(&bits) {
                out.push(Violation {
                    constraint: ConstraintId::E1,
                    at: Indices { k: Some(k), n: Some(n), lo: Some(lo), hi: Some(hi), ..Default::default() },
                    detail: format!(
                        "train type {}: units {} and {} are in section {} but a unit between them is not",
                        train.label,
                        lo + 1,
                        hi + 1,
                        n + 1
                    ),
                });
            }
        }

        for n in 0..sections {
            for i in 0..c {
                if spec.a.at(k, n, i) && !spec.s.at(k, i) {
                    out.push(Violation {
                        constraint: ConstraintId::E2,
                        at: Indices { k: Some(k), n: Some(n), i: Some(i), ..Default::default() },
                        detail: format!(
                            "train type {}: section {} aligns at {} where the train does not stop",
                            train.label,
                            n + 1,
                            label(i)
                        ),
                    });
                }
            }
        }

        for i in 0..c {
            let bits: Vec<bool> = (0..sections).map(|n| spec.a.at(k, n, i)).collect();
            for (lo, hi) in broken_runs(&bits) {
                out.push(Violation {
                    constraint: ConstraintId::E3,
                    at: Indices { k: Some(k), i: Some(i), lo: Some(lo), hi: Some(hi), ..Default::default() },
                    detail: format!(
                        "train type {}: sections {} and {} align at {} but a section between them does not",
                        train.label,
                        lo + 1,
                        hi + 1,
                        label(i)
                    ),
                });
            }
        }

        for i in 0..c {
            let mut length = Q::zero();
            for n in 0..sections {
                if !spec.a.at(k, n, i) {
                    continue;
                }
                for m in 0..units {
                    if spec.u.at(k, m, n) {
                        if let Some(l) = train.unit_length.get(m) {
                            length += l;
                        }
                    }
                }
            }
            let d = Q::from_integer(spec.stations.d.get(i).copied().unwrap_or(0).into());
            if length > d {
                out.push(Violation {
                    constraint: ConstraintId::E4,
                    at: Indices { k: Some(k), i: Some(i), ..Default::default() },
                    detail: format!(
                        "train type {}: aligned length {} exceeds platform length {} at {}",
                        train.label,
                        display_q(&length),
                        display_q(&d),
                        label(i)
                    ),
                });
            }
        }

        for n in 0..sections {
            for i in 0..c {
                if spec.v.at(k, n, i) && !spec.a.at(k, n, i) {
                    out.push(Violation {
                        constraint: ConstraintId::E5,
                        at: Indices { k: Some(k), n: Some(n), i: Some(i), ..Default::default() },
                        detail: format!(
                            "train type {}: section {} opens doors at {} without being aligned",
                            train.label,
                            n + 1,
                            label(i)
                        ),
                    });
                }
            }
        }

        for n in 0..sections {
            for i in 0..c {
                for j in 0..c {
                    if spec.p.at(k, n, i, j) && !(spec.v.at(k, n, i) && spec.v.at(k, n, j)) {
                        out.push(Violation {
                            constraint: ConstraintId::E6,
                            at: Indices { k: Some(k), n: Some(n), i: Some(i), j: Some(j), ..Default::default() },
                            detail: format!(
                                "train type {}: section {} presents {} at {} but its doors are not open at both",
                                train.label,
                                n + 1,
                                label(j),
                                label(i)
                            ),
                        });
                    }
                }
            }
        }
    }

    for extra in &options.custom {
        for (at, detail) in (extra.eval)(spec) {
            out.push(Violation { constraint: ConstraintId::Custom(extra.name.clone()), at, detail });
        }
    }
    FeasibilityReport::from_violations(out)
}

/// Type pairs `(i, j)` some section aligns at both, i.e. pairs the tables can serve directly.
pub fn connected_pairs(spec: &ProtocolSpec) -> Vec<(usize, usize)> {
    let c = spec.stations.len();
    let mut pairs = BTreeSet::new();
    for (k, t) in spec.trains.iter().enumerate() {
        for n in 0..t.sections {
            for i in 0..c {
                for j in 0..c {
                    if spec.a.at(k, n, i) && spec.a.at(k, n, j) {
                        pairs.insert((i, j));
                    }
                }
            }
        }
    }
    pairs.into_iter().collect()
}

/// Counts presenting sections per required `(i, j)` on every train type that
/// stops at both `i` and `j`.
pub fn check_presentation_standard(
    spec: &ProtocolSpec,
    mode: PresentationMode,
    pairs: &[(usize, usize)],
) -> FeasibilityReport {
    let mut out = Vec::new();
    for (k, t) in spec.trains.iter().enumerate() {
        for &(i, j) in pairs {
            if !(spec.s.at(k, i) && spec.s.at(k, j)) {
                continue;
            }
            let count = (0..t.sections).filter(|&n| spec.p.at(k, n, i, j)).count();
            let (bad, id) = match mode {
                PresentationMode::AtLeastOne => (count < 1, ConstraintId::PsMin),
                PresentationMode::ExactlyOne => (count != 1, ConstraintId::PsExact),
            };
            if bad {
                out.push(Violation {
                    constraint: id,
                    at: Indices { k: Some(k), i: Some(i), j: Some(j), ..Default::default() },
                    detail: format!(
                        "train type {}: {} sections present {} at {}",
                        t.label, count, spec.stations.labels[j], spec.stations.labels[i]
                    ),
                });
            }
        }
    }
    FeasibilityReport::from_violations(out)
}

/// Sections of `k` that may ever align, i.e. hold no never-aligned unit.
fn alignable_sections(spec: &ProtocolSpec, k: usize) -> Vec<usize> {
    let doorless = spec.doorless_sections(k);
    (0..spec.trains[k].sections).filter(|n| !doorless.contains(n)).collect()
}

/// End-of-line check on the spec's station classification.
///
/// With an explicit [`crate::model::EolRule`] the first and last stations must
/// carry one of the listed types. Without one, every train type stopping at
/// the first station must align its rear-most alignable section there, and at
/// the last station its front-most one, so no train protrudes past the ends
/// of the track.
pub fn check_eol(spec: &ProtocolSpec) -> FeasibilityReport {
    let mut out = Vec::new();
    let Some(types) = spec.delta.type_indices() else {
        return FeasibilityReport::from_violations(out);
    };
    let Some(&first) = types.first() else {
        return FeasibilityReport::from_violations(out);
    };
    let last_s = types.len() - 1;
    let last = types[last_s];
    let label = |i: usize| spec.stations.labels[i].as_str();
    match &spec.eol {
        Some(rule) => {
            if !rule.first.iter().any(|l| l == label(first)) {
                out.push(Violation {
                    constraint: ConstraintId::Eol,
                    at: Indices { s: Some(0), i: Some(first), ..Default::default() },
                    detail: format!("first station is {} but must be one of {:?}", label(first), rule.first),
                });
            }
            if !rule.last.iter().any(|l| l == label(last)) {
                out.push(Violation {
                    constraint: ConstraintId::Eol,
                    at: Indices { s: Some(last_s), i: Some(last), ..Default::default() },
                    detail: format!("last station is {} but must be one of {:?}", label(last), rule.last),
                });
            }
        }
        None => {
            for k in 0..spec.trains.len() {
                let alignable = alignable_sections(spec, k);
                let (Some(&front), Some(&rear)) = (alignable.first(), alignable.last()) else {
                    continue;
                };
                for (s, i, n, end) in [(0, first, rear, "rear"), (last_s, last, front, "front")] {
                    if spec.s.at(k, i) && !spec.a.at(k, n, i) {
                        out.push(Violation {
                            constraint: ConstraintId::Eol,
                            at: Indices { k: Some(k), s: Some(s), i: Some(i), ..Default::default() },
                            detail: format!(
                                "train type {} protrudes past the {} end of the line at station {} ({})",
                                spec.trains[k].label,
                                end,
                                s + 1,
                                label(i)
                            ),
                        });
                    }
                }
            }
        }
    }
    FeasibilityReport::from_violations(out)
}
