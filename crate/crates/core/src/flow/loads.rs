use num::{Signed, Zero};
use serde::Serialize;

use super::{AssignmentTensor, FlowError};
use crate::model::LineInstance;
use crate::rational::{serde_q, serde_q_mat, serde_q_vec, Q};

/// Passengers per train aboard each section on each link.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadProfile {
    /// `load[n][s]`: section `n` on the link departing station `s`.
    #[serde(with = "serde_q_mat")]
    pub load: Vec<Vec<Q>>,
    #[serde(with = "serde_q_vec")]
    pub capacities: Vec<Q>,
    /// `(n, s)` pairs whose load exceeds the section capacity.
    pub overcrowded: Vec<(usize, usize)>,
    #[serde(with = "serde_q")]
    pub headway: Q,
}

impl LoadProfile {
    pub fn num_links(&self) -> usize {
        self.load.first().map_or(0, Vec::len)
    }

    pub fn link_total(&self, s: usize) -> Q {
        self.load.iter().map(|row| row[s].clone()).sum()
    }
}

/// `E_zs' = E_z A_zs' / A_z`, per hour.
pub(crate) fn od_rate(line: &LineInstance, entries: &[Q], z: usize, t: usize) -> Q {
    let a_z = line.total_demand(z);
    if a_z.is_zero() {
        return Q::zero();
    }
    &entries[z] * &line.demand[z][t] / a_z
}

pub(crate) fn check_entries(line: &LineInstance, entries: &[Q]) -> Result<(), FlowError> {
    if entries.len() != line.num_stations() {
        return Err(FlowError::InvalidInput(format!(
            "{} entry rates for {} stations",
            entries.len(),
            line.num_stations()
        )));
    }
    if let Some(s) = entries.iter().position(|e| e.is_negative()) {
        return Err(FlowError::InvalidInput(format!("entry rate at station {} is negative", s + 1)));
    }
    Ok(())
}

/// `load[n][s] = H Σ_{z<=s} Σ_{s'>s} E_zs' Δ_nzs'`.
pub fn simulate_loads(
    assignment: &AssignmentTensor,
    entries: &[Q],
    line: &LineInstance,
    capacities: &[Q],
) -> Result<LoadProfile, FlowError> {
    check_entries(line, entries)?;
    let sn = line.num_stations();
    let n_sec = assignment.num_sections();
    if capacities.len() != n_sec || assignment.num_stations() != sn {
        return Err(FlowError::InvalidInput("assignment, capacities and line disagree in size".into()));
    }
    let links = sn.saturating_sub(1);
    let rate: Vec<Vec<Q>> = (0..sn).map(|z| (0..sn).map(|t| od_rate(line, entries, z, t)).collect()).collect();
    let mut load = vec![vec![Q::zero(); links]; n_sec];
    let mut overcrowded = Vec::new();
    for (n, row) in load.iter_mut().enumerate() {
        for (s, cell) in row.iter_mut().enumerate() {
            let mut sum = Q::zero();
            for z in 0..=s {
                for t in s + 1..sn {
                    let share = assignment.at(n, z, t);
                    if !share.is_zero() {
                        sum += &rate[z][t] * share;
                    }
                }
            }
            *cell = sum * &line.headway;
            if *cell > capacities[n] {
                overcrowded.push((n, s));
            }
        }
    }
    Ok(LoadProfile { load, capacities: capacities.to_vec(), overcrowded, headway: line.headway.clone() })
}

/// Boardings and alightings per train, `[n][s]`, for conservation checks.
pub fn boardings_and_alightings(
    assignment: &AssignmentTensor,
    entries: &[Q],
    line: &LineInstance,
) -> (Vec<Vec<Q>>, Vec<Vec<Q>>) {
    let sn = line.num_stations();
    let n_sec = assignment.num_sections();
    let mut on = vec![vec![Q::zero(); sn]; n_sec];
    let mut off = vec![vec![Q::zero(); sn]; n_sec];
    for n in 0..n_sec {
        for z in 0..sn {
            for t in z + 1..sn {
                let pax = od_rate(line, entries, z, t) * assignment.at(n, z, t) * &line.headway;
                on[n][z] += &pax;
                off[n][t] += pax;
            }
        }
    }
    (on, off)
}
