use num::{Signed, Zero};
use serde::Serialize;

use super::MeteringSolution;
use crate::rational::{serde_q_vec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    /// Maximum-load link.
    pub mlp: usize,
    /// Passengers per unit in each section on the MLP link.
    #[serde(with = "serde_q_vec")]
    pub densities: Vec<Q>,
    /// Highest over lowest density; absent when some section is empty.
    #[serde(skip_serializing_if = "Option::is_none", with = "crate::rational::serde_q_opt", default)]
    pub ratio: Option<Q>,
    /// Sections carrying nobody at the MLP.
    pub unused: Vec<usize>,
}

/// Per-section load per unit at the maximum-load link.
pub fn even_density_check(solution: &MeteringSolution) -> DensityReport {
    let p = &solution.profile;
    let mut mlp = 0;
    for s in 1..p.num_links() {
        if p.link_total(s) > p.link_total(mlp) {
            mlp = s;
        }
    }
    let densities: Vec<Q> = p
        .load
        .iter()
        .zip(&solution.section_sizes)
        .map(|(row, &u)| row.get(mlp).cloned().unwrap_or_else(Q::zero) / Q::from_integer(u.into()))
        .collect();
    let unused: Vec<usize> = (0..densities.len()).filter(|&n| densities[n].is_zero()).collect();
    let ratio = match (densities.iter().max(), densities.iter().min()) {
        (Some(hi), Some(lo)) if lo.is_positive() => Some(hi / lo),
        _ => None,
    };
    DensityReport { mlp, densities, ratio, unused }
}
