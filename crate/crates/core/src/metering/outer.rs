use std::cmp::Ordering;

use rayon::prelude::*;

use super::inner::{candidate_spec, check_problem, solve_spec};
use super::{MeteringError, MeteringProblem, MeteringSolution};
use crate::feasibility::check_eol;
use crate::flow::station_types;
use crate::model::ProtocolSpec;
use crate::rational::Q;

pub const DEFAULT_CAP: u128 = 1_000_000;

/// Compositions of `total` into `parts` positive integers, lexicographic order.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for x in 1..=left.saturating_sub(parts as u32 - 1) {
            prefix.push(x);
            rec(left - x, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 && total >= parts as u32 {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Station types allowed at each station: end stations are pinned by an
/// explicit end-of-line rule when the spec carries one.
fn allowed_types(problem: &MeteringProblem) -> Result<Vec<Vec<usize>>, MeteringError> {
    let spec = &problem.spec;
    let sn = problem.line.num_stations();
    if !problem.classify_stations {
        let types = station_types(spec, &problem.line)?;
        return Ok(types.into_iter().map(|i| vec![i]).collect());
    }
    let all: Vec<usize> = (0..spec.num_types()).collect();
    let pinned = |labels: &[String]| -> Vec<usize> {
        all.iter().copied().filter(|&i| labels.iter().any(|l| *l == spec.stations.labels[i])).collect()
    };
    Ok((0..sn)
        .map(|s| match &spec.eol {
            Some(rule) if s == 0 => pinned(&rule.first),
            Some(rule) if s + 1 == sn => pinned(&rule.last),
            _ => all.clone(),
        })
        .collect())
}

fn sizings(problem: &MeteringProblem) -> Vec<Vec<u32>> {
    let spec = &problem.spec;
    if problem.size_sections {
        compositions(spec.trains[0].units as u32, spec.num_sections(0))
    } else {
        vec![spec.section_sizes(0)]
    }
}

/// Number of (classification, sizing) candidates the outer search visits.
pub fn candidate_count(problem: &MeteringProblem) -> Result<u128, MeteringError> {
    let per_station = allowed_types(problem)?;
    let deltas = per_station.iter().fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128));
    let sizes = if problem.size_sections {
        let m = problem.spec.trains[0].units as u128;
        let n = problem.spec.num_sections(0) as u128;
        if m < n || n == 0 {
            0
        } else {
            binomial(m - 1, n - 1)
        }
    } else {
        1
    };
    Ok(deltas.saturating_mul(sizes))
}

/// Aligned length at every station type fits the shortest platform of that
/// type on the line, and the end stations satisfy the end-of-line rule.
fn admissible(problem: &MeteringProblem, spec: &ProtocolSpec, types: &[usize]) -> bool {
    let shortest = problem.line.shortest_platforms(types, spec.num_types());
    for (i, d) in shortest.iter().enumerate() {
        let Some(d) = d else { continue };
        let aligned: Q =
            (0..spec.num_sections(0)).filter(|&n| spec.a.at(0, n, i)).map(|n| spec.section_length(0, n)).sum();
        if aligned > Q::from_integer((*d).into()) {
            return false;
        }
    }
    check_eol(spec).feasible
}

fn decode(mut idx: u128, per_station: &[Vec<usize>]) -> Vec<usize> {
    let mut out = vec![0; per_station.len()];
    for (s, opts) in per_station.iter().enumerate().rev() {
        let r = opts.len() as u128;
        out[s] = opts[(idx % r) as usize];
        idx /= r;
    }
    out
}

type Scored = (Q, Vec<usize>, Vec<u32>, MeteringSolution);

fn better(a: Scored, b: Scored) -> Scored {
    match a.0.cmp(&b.0) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if (&a.1, &a.2) <= (&b.1, &b.2) {
                a
            } else {
                b
            }
        }
    }
}

/// Exhaustive search over classifications and sizings, solving the entry-rate
/// LP for each admissible candidate. Ties go to the lexicographically smallest
/// (classification, sizing).
pub fn solve_outer(problem: &MeteringProblem) -> Result<MeteringSolution, MeteringError> {
    check_problem(problem)?;
    let count = candidate_count(problem)?;
    if count > problem.cap {
        return Err(MeteringError::SearchSpaceTooLarge { count });
    }
    let per_station = allowed_types(problem)?;
    let deltas: u128 = per_station.iter().map(|a| a.len() as u128).product();
    let sizes = sizings(problem);
    if deltas == 0 || sizes.is_empty() {
        return Err(MeteringError::NoFeasibleCandidate);
    }
    let n_sizes = sizes.len() as u128;
    let best = (0..deltas * n_sizes)
        .into_par_iter()
        .filter_map(|idx| {
            let types = decode(idx / n_sizes, &per_station);
            let u = &sizes[(idx % n_sizes) as usize];
            let spec = candidate_spec(&problem.spec, &types, u).ok()?;
            if !admissible(problem, &spec, &types) {
                return None;
            }
            let sol = solve_spec(problem, &spec).ok()?;
            Some((sol.objective.clone(), types, u.clone(), sol))
        })
        .reduce_with(better);
    best.map(|(_, _, _, sol)| sol).ok_or(MeteringError::NoFeasibleCandidate)
}
