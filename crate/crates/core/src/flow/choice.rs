//! Passenger section choice when several sections present the same trip.

use std::str::FromStr;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::assignment::{build_assignment, single_train, station_types};
use super::loads::{check_entries, od_rate};
use super::{AssignmentTensor, FlowError};
use crate::model::{LineInstance, ProtocolSpec};
use crate::rational::Q;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChoiceRule {
    /// Boarding passengers equalize load over capacity among the sections on offer.
    #[default]
    BalancedFill,
    /// End sections are filled up to capacity first; the overflow is balanced
    /// over every section on offer.
    EndPreference,
}

impl FromStr for ChoiceRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "balanced-fill" | "balanced" => Ok(Self::BalancedFill),
            "end-preference" | "end-preference-with-overflow" => Ok(Self::EndPreference),
            other => Err(format!("unknown choice rule `{other}`")),
        }
    }
}

/// Splits `amount` over sections with current `loads` and `caps` so the
/// highest resulting load/capacity ratio is as small as possible.
///
/// Sections with zero capacity receive nothing unless every capacity is zero,
/// in which case the amount is split evenly.
pub fn water_fill(loads: &[Q], caps: &[Q], amount: &Q) -> Vec<Q> {
    let n = loads.len();
    let mut add = vec![Q::zero(); n];
    if n == 0 || !amount.is_positive() {
        return add;
    }
    let mut order: Vec<usize> = (0..n).filter(|&x| caps[x].is_positive()).collect();
    if order.is_empty() {
        let share = amount / Q::from_integer((n as i64).into());
        return vec![share; n];
    }
    let ratio = |x: usize| &loads[x] / &caps[x];
    order.sort_by(|&a, &b| ratio(a).cmp(&ratio(b)).then(a.cmp(&b)));
    let mut sum_load = Q::zero();
    let mut sum_cap = Q::zero();
    let mut active = 0;
    let level = loop {
        let x = order[active];
        sum_load += &loads[x];
        sum_cap += &caps[x];
        active += 1;
        let level = (amount + &sum_load) / &sum_cap;
        match order.get(active) {
            Some(&next) if ratio(next) < level => continue,
            _ => break level,
        }
    };
    for &x in &order[..active] {
        add[x] = &level * &caps[x] - &loads[x];
    }
    add
}

fn end_preference(loads: &[Q], caps: &[Q], is_end: &[bool], amount: &Q) -> Vec<Q> {
    let ends: Vec<usize> = (0..loads.len()).filter(|&x| is_end[x]).collect();
    let room: Q = ends
        .iter()
        .map(|&x| {
            let r = &caps[x] - &loads[x];
            if r.is_positive() {
                r
            } else {
                Q::zero()
            }
        })
        .sum();
    let first = if &room < amount { room } else { amount.clone() };
    let mut add = vec![Q::zero(); loads.len()];
    if first.is_positive() {
        let end_loads: Vec<Q> = ends.iter().map(|&x| loads[x].clone()).collect();
        let end_caps: Vec<Q> = ends.iter().map(|&x| caps[x].clone()).collect();
        for (x, extra) in ends.iter().zip(water_fill(&end_loads, &end_caps, &first)) {
            add[*x] = extra;
        }
    }
    let rest = amount - &first;
    if rest.is_positive() {
        let now: Vec<Q> = loads.iter().zip(&add).map(|(l, a)| l + a).collect();
        for (a, extra) in add.iter_mut().zip(water_fill(&now, caps, &rest)) {
            *a += extra;
        }
    }
    add
}

/// Assignment under a passenger-choice rule, boarding station by station.
///
/// At each station the departing flows are placed in order of fewest
/// candidate sections, then nearest destination; each flow is split according
/// to the loads its candidates carry out of the station.
pub fn assign_with_rule(
    spec: &ProtocolSpec,
    line: &LineInstance,
    entries: &[Q],
    rule: ChoiceRule,
) -> Result<AssignmentTensor, FlowError> {
    single_train(spec)?;
    check_entries(line, entries)?;
    let types = station_types(spec, line)?;
    let sn = types.len();
    let n_sec = spec.num_sections(0);
    let caps: Vec<Q> = (0..n_sec).map(|n| spec.section_capacity(0, n)).collect();
    let alignable: Vec<usize> = {
        let doorless = spec.doorless_sections(0);
        (0..n_sec).filter(|n| !doorless.contains(n)).collect()
    };
    let is_end: Vec<bool> = (0..n_sec).map(|n| alignable.first() == Some(&n) || alignable.last() == Some(&n)).collect();
    let mut out = AssignmentTensor::zeros(n_sec, sn);
    // onboard[n][t]: passengers in section n bound for station t
    let mut onboard = vec![vec![Q::zero(); sn]; n_sec];
    for z in 0..sn {
        for row in onboard.iter_mut() {
            row[z] = Q::zero();
        }
        let mut flows: Vec<(usize, Vec<usize>)> = Vec::new();
        for t in z + 1..sn {
            if line.demand[z][t].is_zero() {
                continue;
            }
            let cands: Vec<usize> = (0..n_sec).filter(|&n| spec.p.at(0, n, types[z], types[t])).collect();
            if cands.is_empty() {
                return Err(FlowError::UnservedPair { origin: z + 1, destination: t + 1 });
            }
            flows.push((t, cands));
        }
        flows.sort_by_key(|(t, c)| (c.len(), *t));
        for (t, cands) in flows {
            let amount = od_rate(line, entries, z, t) * &line.headway;
            let cur: Vec<Q> = cands.iter().map(|&n| onboard[n].iter().sum()).collect();
            let cap: Vec<Q> = cands.iter().map(|&n| caps[n].clone()).collect();
            let shares: Vec<Q> = if amount.is_positive() {
                let add = match rule {
                    ChoiceRule::BalancedFill => water_fill(&cur, &cap, &amount),
                    ChoiceRule::EndPreference => {
                        let ends: Vec<bool> = cands.iter().map(|&n| is_end[n]).collect();
                        end_preference(&cur, &cap, &ends, &amount)
                    }
                };
                for (&n, a) in cands.iter().zip(&add) {
                    onboard[n][t] += a;
                }
                add.into_iter().map(|a| a / &amount).collect()
            } else {
                // no passengers: record the section a marginal passenger would pick
                let probe = water_fill(&cur, &cap, &Q::one());
                let pick = (0..cands.len()).find(|&x| probe[x].is_positive()).unwrap_or(0);
                (0..cands.len()).map(|x| if x == pick { Q::one() } else { Q::zero() }).collect()
            };
            for (&n, share) in cands.iter().zip(shares) {
                out.delta[n][z][t] = share;
            }
        }
    }
    Ok(out)
}

/// Exact assignment when presentation picks one section per trip; otherwise
/// falls back to the choice rule.
pub fn assign(
    spec: &ProtocolSpec,
    line: &LineInstance,
    entries: &[Q],
    rule: ChoiceRule,
) -> Result<AssignmentTensor, FlowError> {
    match build_assignment(spec, line) {
        Err(FlowError::AmbiguousAssignment { .. }) => assign_with_rule(spec, line, entries, rule),
        other => other,
    }
}
