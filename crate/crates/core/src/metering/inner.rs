use num::{Signed, Zero};

use super::simplex::maximize;
use super::{Binding, MeteringError, MeteringProblem, MeteringSolution, Objective};
use crate::flow::{build_assignment, simulate_loads, station_types, AssignmentTensor};
use crate::model::{LineInstance, ProtocolSpec, StationClassification};
use crate::rational::Q;

/// Overcrowding rows `(section, link, coefficients)`: per-train load on the
/// link as a linear function of the entry rates.
pub fn constraint_rows(asg: &AssignmentTensor, line: &LineInstance) -> Vec<(usize, usize, Vec<Q>)> {
    let sn = line.num_stations();
    let totals: Vec<Q> = (0..sn).map(|z| line.total_demand(z)).collect();
    let mut rows = Vec::new();
    for n in 0..asg.num_sections() {
        for s in 0..sn.saturating_sub(1) {
            let coef: Vec<Q> = (0..sn)
                .map(|z| {
                    if z > s || !totals[z].is_positive() {
                        return Q::zero();
                    }
                    let share: Q = (s + 1..sn)
                        .filter(|&t| !asg.at(n, z, t).is_zero())
                        .map(|t| &line.demand[z][t] * asg.at(n, z, t))
                        .sum();
                    share / &totals[z] * &line.headway
                })
                .collect();
            rows.push((n, s, coef));
        }
    }
    rows
}

fn objective_weights(line: &LineInstance, objective: Objective) -> Vec<Q> {
    let sn = line.num_stations();
    match objective {
        Objective::Entries => vec![Q::from_integer(1.into()); sn],
        Objective::PassengerKm => {
            let len = line.link_lengths();
            (0..sn)
                .map(|z| {
                    let a_z = line.total_demand(z);
                    if !a_z.is_positive() {
                        return Q::zero();
                    }
                    let km: Q = (z + 1..sn).map(|t| &line.demand[z][t] * len[z..t].iter().sum::<Q>()).sum();
                    km / a_z
                })
                .collect()
        }
    }
}

/// Specializes the protocol to one classification and sizing.
pub(crate) fn candidate_spec(
    spec: &ProtocolSpec,
    types: &[usize],
    sizes: &[u32],
) -> Result<ProtocolSpec, MeteringError> {
    let mut out = spec.clone();
    out.delta = StationClassification::from_type_indices(types, spec.num_types());
    if sizes != spec.section_sizes(0).as_slice() {
        out.resize_sections(0, sizes)?;
    }
    Ok(out)
}

pub(crate) fn check_problem(problem: &MeteringProblem) -> Result<(), MeteringError> {
    let line = &problem.line;
    line.validate()?;
    if problem.spec.trains.len() != 1 {
        return Err(MeteringError::InvalidProblem("metering needs a single train type".into()));
    }
    for s in 0..line.num_stations() {
        if line.min_rates[s].is_negative() || line.min_rates[s] > line.total_demand(s) {
            return Err(MeteringError::InvalidProblem(format!(
                "minimum rate at station {} is outside [0, demand]",
                s + 1
            )));
        }
    }
    Ok(())
}

/// Best entry rates for a fixed classification (type index per station) and
/// section sizing.
pub fn solve_inner_with(
    problem: &MeteringProblem,
    types: &[usize],
    sizes: &[u32],
) -> Result<MeteringSolution, MeteringError> {
    check_problem(problem)?;
    let spec = candidate_spec(&problem.spec, types, sizes)?;
    solve_spec(problem, &spec)
}

/// Best entry rates for the problem's own classification and sizing.
pub fn solve_inner_lp(problem: &MeteringProblem) -> Result<MeteringSolution, MeteringError> {
    check_problem(problem)?;
    station_types(&problem.spec, &problem.line)?;
    solve_spec(problem, &problem.spec)
}

pub(crate) fn solve_spec(problem: &MeteringProblem, spec: &ProtocolSpec) -> Result<MeteringSolution, MeteringError> {
    let line = &problem.line;
    let sn = line.num_stations();
    let asg = build_assignment(spec, line)?;
    let caps: Vec<Q> = (0..spec.num_sections(0)).map(|n| spec.section_capacity(0, n)).collect();
    let rows = constraint_rows(&asg, line);
    let lower = &line.min_rates;
    let upper: Vec<Q> = (0..sn).map(|s| line.total_demand(s) - &lower[s]).collect();

    // x = E - M, 0 <= x <= A - M
    let mut a: Vec<Vec<Q>> = Vec::with_capacity(rows.len() + sn);
    let mut b: Vec<Q> = Vec::with_capacity(rows.len() + sn);
    for (n, s, coef) in &rows {
        let base: Q = coef.iter().zip(lower).map(|(c, m)| c * m).sum();
        let rhs = &caps[*n] - base;
        if rhs.is_negative() {
            return Err(MeteringError::InfeasibleMinRates { section: *n, station: *s });
        }
        a.push(coef.clone());
        b.push(rhs);
    }
    for (z, u) in upper.iter().enumerate() {
        let mut row = vec![Q::zero(); sn];
        row[z] = Q::from_integer(1.into());
        a.push(row);
        b.push(u.clone());
    }
    let weights = objective_weights(line, problem.objective);
    let lp = maximize(&weights, &a, &b).ok_or_else(|| MeteringError::InvalidProblem("unbounded".into()))?;
    let entries: Vec<Q> = lp.x.iter().zip(lower).map(|(x, m)| x + m).collect();
    let objective: Q = entries.iter().zip(&weights).map(|(e, w)| e * w).sum();

    let mut binding = Vec::new();
    for z in 0..sn {
        if entries[z] == lower[z] {
            binding.push(Binding::MinRate { station: z });
        }
        if entries[z] == line.total_demand(z) {
            binding.push(Binding::Demand { station: z });
        }
    }
    for ((n, s, coef), slack) in rows.iter().zip(&lp.slack) {
        if slack.is_zero() && coef.iter().any(|c| !c.is_zero()) {
            binding.push(Binding::Capacity { section: *n, station: *s });
        }
    }
    binding.sort();
    let profile = simulate_loads(&asg, &entries, line, &caps)?;
    let types = station_types(spec, line)?;
    Ok(MeteringSolution {
        entries,
        classification: types.iter().map(|&i| spec.stations.labels[i].clone()).collect(),
        section_sizes: spec.section_sizes(0),
        objective,
        profile,
        binding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fr_i;
    use crate::rational::{q, qr};

    fn fixture(scale: Q) -> MeteringProblem {
        let spec = fr_i(&[4, 1, 3, 4]).unwrap().classify(&["R", "F", "R", "F"]).unwrap();
        let mut a = vec![vec![Q::zero(); 4]; 4];
        a[0][2] = q(40) * &scale;
        a[0][3] = q(30) * &scale;
        a[1][2] = q(10) * &scale;
        a[1][3] = q(40) * &scale;
        MeteringProblem::new(LineInstance::new(8, qr(1, 10), a), spec)
    }

    #[test]
    fn loose_capacity_serves_all_demand() {
        let sol = solve_inner_lp(&fixture(q(1))).unwrap();
        assert_eq!(sol.entries, vec![q(70), q(50), q(0), q(0)]);
        assert_eq!(sol.objective, q(120));
        assert!(sol.profile.overcrowded.is_empty());
    }

    #[test]
    fn tight_capacity_meters_entries() {
        let sol = solve_inner_lp(&fixture(q(2))).unwrap();
        // sections run full: E_1 limited by 4 RR riders, E_2 by 4 FF riders
        assert_eq!(sol.entries[0], q(70));
        assert_eq!(sol.entries[1], q(50));
        assert!(sol.binding.contains(&Binding::Capacity { section: 0, station: 1 }));
        for z in 0..4 {
            let bound = sol.binding.iter().any(|b| match b {
                Binding::MinRate { station } | Binding::Demand { station } => *station == z,
                Binding::Capacity { .. } => false,
            });
            let in_row = sol.binding.iter().any(|b| matches!(b, Binding::Capacity { station, .. } if *station >= z));
            assert!(bound || in_row);
        }
    }

    #[test]
    fn min_rates_can_be_infeasible() {
        let mut p = fixture(q(2));
        p.line.min_rates[0] = q(140);
        assert!(matches!(solve_inner_lp(&p), Err(MeteringError::InfeasibleMinRates { .. })));
    }
}
