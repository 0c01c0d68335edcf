//! Protocols with several train types.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{generate_s, BarChart, MultiTrainChart, SFamilyError, TrainChart};
use crate::rational::q;

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Chart whose bars are placed at the positions of `base` bars: each entry of
/// `placement` is `(label, base bar index)`.
fn place(base: &BarChart, placement: &[(&str, usize)]) -> BarChart {
    BarChart::new(base.m, placement.iter().map(|&(label, i)| (label.to_string(), base.bars[i].b, base.bars[i].d)))
}

/// Three S(3, 2) trains (M = 8, d = 4) over subtypes A, B, C, D, T.
///
/// Type 1: F = (A, B), R = (C, D); type 2: F = (A, C), R = (B, D);
/// type 3: F = (A, D), R = (B, C). T is the middle bar on every type.
pub fn build_ftr3() -> MultiTrainChart {
    let base = generate_s(3, &q(2), 4).expect("S(3,2) on 4-unit platforms is integral");
    let (r, t, f) = (0, 1, 2);
    let groups = [("1", ["A", "B"], ["C", "D"]), ("2", ["A", "C"], ["B", "D"]), ("3", ["A", "D"], ["B", "C"])];
    let trains = groups
        .iter()
        .map(|(label, fs, rs)| TrainChart {
            label: label.to_string(),
            chart: place(&base, &[(rs[0], r), (rs[1], r), ("T", t), (fs[0], f), (fs[1], f)]),
        })
        .collect();
    MultiTrainChart::new(labels(&["A", "B", "C", "D", "T"]), trains).expect("F/T/R/3 charts are consistent")
}

/// Two S(5, 2) trains (M = 12, d = 4) dispatched alternately; labels B and D
/// are swapped on the second.
pub fn build_s52_2() -> MultiTrainChart {
    let first = labels(&["A", "B", "C", "D", "E"]);
    let second = labels(&["A", "D", "C", "B", "E"]);
    let chart =
        |l: &[String]| super::generate_s_labeled(5, &q(2), 4, l).expect("S(5,2) on 4-unit platforms is integral");
    MultiTrainChart::new(
        first.clone(),
        vec![
            TrainChart { label: "1".into(), chart: chart(&first) },
            TrainChart { label: "2".into(), chart: chart(&second) },
        ],
    )
    .expect("S(5,2)/2 charts are consistent")
}

/// Skip-stop plan: one train type per station subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipStopPlan {
    pub chart: MultiTrainChart,
    /// Stations served by each train type along the line.
    pub stops_per_train: Vec<usize>,
}

/// One train type per subset; subset labels are assigned to the base bars
/// bottom to top and every other station type is skipped (`b = 0`).
///
/// `station_labels` is the classification of the line's stations in travel order.
pub fn compose_skip_stop(
    base: &BarChart,
    subsets: &[Vec<String>],
    station_labels: &[String],
) -> Result<SkipStopPlan, SFamilyError> {
    base.validate()?;
    let mut universe: Vec<String> = Vec::new();
    for subset in subsets {
        if subset.len() != base.bars.len() {
            return Err(SFamilyError::SubsetCoverage(format!(
                "subset {:?} has {} labels but the base chart has {} bars",
                subset,
                subset.len(),
                base.bars.len()
            )));
        }
        for l in subset {
            if !universe.contains(l) {
                universe.push(l.clone());
            }
        }
    }
    if let Some(s) = station_labels.iter().find(|s| !universe.contains(s)) {
        return Err(SFamilyError::SubsetCoverage(format!("station type {s} is not served by any subset")));
    }
    let mut trains = Vec::with_capacity(subsets.len());
    let mut stops = Vec::with_capacity(subsets.len());
    for (k, subset) in subsets.iter().enumerate() {
        let served: BTreeSet<&String> = subset.iter().collect();
        let mut bars: Vec<(String, u32, u32)> =
            subset.iter().zip(&base.bars).map(|(l, bar)| (l.clone(), bar.b, bar.d)).collect();
        let d_skip = base.bars.iter().map(|b| b.d).min().unwrap_or(1);
        for l in universe.iter().filter(|l| !served.contains(l)) {
            bars.push((l.clone(), 0, d_skip));
        }
        trains.push(TrainChart { label: (k + 1).to_string(), chart: BarChart::new(base.m, bars) });
        stops.push(station_labels.iter().filter(|s| served.contains(s)).count());
    }
    Ok(SkipStopPlan { chart: MultiTrainChart::new(universe, trains)?, stops_per_train: stops })
}
