use num::{Signed, Zero};
use serde::Serialize;

use crate::flow::{assign, simulate_loads, station_types, ChoiceRule, FlowError};
use crate::model::{derive_parts, LineInstance, ProtocolSpec};
use crate::rational::{serde_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefineOutcome {
    pub spec: ProtocolSpec,
    /// Highest passengers-per-unit on any section and link, before and after.
    #[serde(with = "serde_q")]
    pub max_density_before: Q,
    #[serde(with = "serde_q")]
    pub max_density_after: Q,
    /// Whether the returned presentation differs from the input.
    pub changed: bool,
}

/// Highest load per unit over sections and links, with balanced-fill choice
/// where a trip is presented by several sections.
pub fn max_density(spec: &ProtocolSpec, line: &LineInstance, entries: &[Q]) -> Result<Q, FlowError> {
    let asg = assign(spec, line, entries, ChoiceRule::BalancedFill)?;
    let caps: Vec<Q> = (0..spec.num_sections(0)).map(|n| spec.section_capacity(0, n)).collect();
    let profile = simulate_loads(&asg, entries, line, &caps)?;
    let sizes = spec.section_sizes(0);
    Ok(profile
        .load
        .iter()
        .zip(sizes)
        .flat_map(|(row, units)| row.iter().map(move |l| l / Q::from_integer(units.into())))
        .max()
        .unwrap_or_else(Q::zero))
}

/// Narrows presentation to one train part per O-D type pair.
///
/// Pairs are placed one at a time: those with the fewest candidate parts
/// first, then by descending demand, then by type index. Each goes to the
/// candidate part whose peak load over capacity stays lowest, ties to the
/// front-most part. The input spec is returned when the refinement would
/// raise the maximum density.
pub fn greedy_presentation_refine(
    spec: &ProtocolSpec,
    line: &LineInstance,
    entries: &[Q],
) -> Result<RefineOutcome, FlowError> {
    let before = max_density(spec, line, entries)?;
    let types = station_types(spec, line)?;
    let parts = derive_parts(spec, 0);
    let c = spec.num_types();
    let links = line.num_stations().saturating_sub(1);

    // per-train load each type pair puts on every link
    let mut pair_load = vec![vec![vec![Q::zero(); links]; c]; c];
    let mut pair_demand = vec![vec![Q::zero(); c]; c];
    for z in 0..line.num_stations() {
        let a_z = line.total_demand(z);
        if !a_z.is_positive() {
            continue;
        }
        for t in z + 1..line.num_stations() {
            let pax = &entries[z] * &line.demand[z][t] / &a_z * &line.headway;
            let (i, j) = (types[z], types[t]);
            pair_demand[i][j] += &pax;
            for l in &mut pair_load[i][j][z..t] {
                *l += &pax;
            }
        }
    }

    let presents = |pi: usize, i: usize, j: usize| parts[pi].sections().any(|n| spec.p.at(0, n, i, j));
    let mut pairs: Vec<(usize, usize, Vec<usize>)> = (0..c)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, (0..parts.len()).filter(|&pi| presents(pi, i, j)).collect::<Vec<_>>()))
        .filter(|(_, _, cands)| !cands.is_empty())
        .collect();
    pairs.sort_by(|(i1, j1, c1), (i2, j2, c2)| {
        c1.len().cmp(&c2.len()).then(pair_demand[*i2][*j2].cmp(&pair_demand[*i1][*j1])).then((i1, j1).cmp(&(i2, j2)))
    });

    let part_cap: Vec<Q> = parts.iter().map(|p| p.sections().map(|n| spec.section_capacity(0, n)).sum()).collect();
    let mut part_load = vec![vec![Q::zero(); links]; parts.len()];
    let mut refined = spec.clone();
    for n in 0..spec.num_sections(0) {
        for row in refined.p.0[0][n].iter_mut() {
            row.iter_mut().for_each(|x| *x = 0);
        }
    }
    for (i, j, cands) in pairs {
        let peak = |pi: usize| -> Q {
            let top = part_load[pi].iter().zip(&pair_load[i][j]).map(|(a, b)| a + b).max().unwrap_or_else(Q::zero);
            if part_cap[pi].is_positive() {
                top / &part_cap[pi]
            } else {
                top
            }
        };
        let mut best = cands[0];
        let mut best_peak = peak(best);
        for &pi in &cands[1..] {
            let v = peak(pi);
            if v < best_peak {
                best = pi;
                best_peak = v;
            }
        }
        for (l, add) in part_load[best].iter_mut().zip(&pair_load[i][j]) {
            *l += add;
        }
        for n in parts[best].sections() {
            if spec.p.at(0, n, i, j) {
                refined.p.set(0, n, i, j, true);
            }
        }
    }

    let after = max_density(&refined, line, entries)?;
    if after <= before {
        let changed = refined.p != spec.p;
        Ok(RefineOutcome { spec: refined, max_density_before: before, max_density_after: after, changed })
    } else {
        Ok(RefineOutcome {
            spec: spec.clone(),
            max_density_after: before.clone(),
            max_density_before: before,
            changed: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::{check, check_presentation_standard, connected_pairs, CheckOptions, PresentationMode};
    use crate::model::{fr_h, trivial};
    use crate::rational::{q, qr};

    fn entries(line: &LineInstance) -> Vec<Q> {
        (0..line.num_stations()).map(|s| line.total_demand(s)).collect()
    }

    #[test]
    fn fr_h_refines_to_one_part_per_pair() {
        let spec = fr_h().classify(&["F", "R", "F", "R"]).unwrap();
        // one quarter of the riders per type pair, all crossing the second link
        let mut a = vec![vec![Q::zero(); 4]; 4];
        a[0][2] = q(30);
        a[0][3] = q(30);
        a[1][2] = q(30);
        a[1][3] = q(30);
        let line = LineInstance::new(9, qr(1, 10), a);
        let out = greedy_presentation_refine(&spec, &line, &entries(&line)).unwrap();
        assert!(out.changed);
        assert_eq!(out.max_density_after, q(1));
        assert!(out.max_density_after < out.max_density_before);
        let (f, r) = (0, 1);
        let presented = |n: usize| {
            [(f, f), (f, r), (r, f), (r, r)].into_iter().filter(|&(i, j)| out.spec.p.at(0, n, i, j)).collect::<Vec<_>>()
        };
        assert_eq!(presented(0), vec![(f, f)]);
        assert_eq!(presented(1), vec![(f, r), (r, f)]);
        assert_eq!(presented(2), vec![(f, r), (r, f)]);
        assert_eq!(presented(3), vec![(r, r)]);
        assert!(check(&out.spec, &CheckOptions::default()).feasible);
        let pairs = connected_pairs(&out.spec);
        assert!(check_presentation_standard(&out.spec, PresentationMode::AtLeastOne, &pairs).feasible);
    }

    #[test]
    fn single_part_is_left_alone() {
        let spec = trivial(4, 4).unwrap().classify(&["A", "A", "A"]).unwrap();
        let mut a = vec![vec![Q::zero(); 3]; 3];
        a[0][1] = q(2);
        a[0][2] = q(3);
        let line = LineInstance::new(4, q(1), a);
        let out = greedy_presentation_refine(&spec, &line, &entries(&line)).unwrap();
        assert!(!out.changed);
        assert_eq!(out.spec, spec);
        assert_eq!(out.max_density_before, out.max_density_after);
    }
}
