use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::SFamilyError;
use crate::rational::Q;
use crate::SCHEMA_VERSION;

/// Alignment bar of one station type.
///
/// `b` is the distance in units from the back of the train to the front of the
/// bar; `0` marks a skipped station type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bar {
    pub label: String,
    pub b: u32,
    pub d: u32,
}

/// Single-train alignment chart. Bars are listed bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarChart {
    #[serde(rename = "M")]
    pub m: u32,
    pub bars: Vec<Bar>,
}

impl BarChart {
    pub fn new(m: u32, bars: impl IntoIterator<Item = (String, u32, u32)>) -> Self {
        Self { m, bars: bars.into_iter().map(|(label, b, d)| Bar { label, b, d }).collect() }
    }

    pub fn validate(&self) -> Result<(), SFamilyError> {
        let bad = |m: String| Err(SFamilyError::InvalidChart(m));
        if self.m == 0 {
            return bad("train length M must be at least 1".into());
        }
        let mut seen = BTreeSet::new();
        for bar in &self.bars {
            if !seen.insert(bar.label.as_str()) {
                return bad(format!("duplicate bar label {}", bar.label));
            }
            if bar.d == 0 {
                return bad(format!("bar {} has zero length", bar.label));
            }
            if bar.b != 0 && bar.b > self.m + bar.d - 1 {
                return bad(format!("bar {}: b = {} outside 1..={}", bar.label, bar.b, self.m + bar.d - 1));
            }
        }
        Ok(())
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.bars.iter().position(|b| b.label == label)
    }

    /// Clipped span `[lo, hi]` of bar `i` on the train, in units from the back.
    pub fn span(&self, i: usize) -> Option<(u32, u32)> {
        let bar = &self.bars[i];
        if bar.b == 0 {
            return None;
        }
        let lo = bar.b.saturating_sub(bar.d);
        let hi = bar.b.min(self.m);
        (hi > lo).then_some((lo, hi))
    }

    pub fn overlap(&self, i: usize) -> u32 {
        self.span(i).map_or(0, |(lo, hi)| hi - lo)
    }

    pub fn is_skipped(&self, i: usize) -> bool {
        self.span(i).is_none()
    }

    /// Length shared by bars `i` and `j` within the train.
    pub fn pair_overlap(&self, i: usize, j: usize) -> u32 {
        match (self.span(i), self.span(j)) {
            (Some((a, b)), Some((c, d))) => b.min(d).saturating_sub(a.max(c)),
            _ => 0,
        }
    }

    /// Unit `m` (0 = front) lies entirely within bar `i`.
    pub fn unit_aligned(&self, m: u32, i: usize) -> bool {
        let back = self.m - m - 1;
        self.span(i).is_some_and(|(lo, hi)| lo <= back && back < hi)
    }

    /// Bars covering unit `m` (0 = front).
    pub fn unit_labels(&self, m: u32) -> BTreeSet<usize> {
        (0..self.bars.len()).filter(|&i| self.unit_aligned(m, i)).collect()
    }

    /// Maximal runs of units with equal label sets, front to rear, as
    /// `(first unit, last unit, bar indices)`.
    pub fn parts(&self) -> Vec<(u32, u32, BTreeSet<usize>)> {
        let mut out: Vec<(u32, u32, BTreeSet<usize>)> = Vec::new();
        for m in 0..self.m {
            let labels = self.unit_labels(m);
            match out.last_mut() {
                Some(p) if p.2 == labels => p.1 = m,
                _ => out.push((m, m, labels)),
            }
        }
        out
    }

    /// Train length over the shortest bar length.
    pub fn length_ratio(&self) -> Option<Q> {
        let d = self.bars.iter().map(|b| b.d).min()?;
        Some(Q::new(self.m.into(), d.into()))
    }
}

/// One train type's chart inside a multi-train protocol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainChart {
    pub label: String,
    pub chart: BarChart,
}

/// Several train types over a shared station-type universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiTrainChart {
    pub schema_version: u32,
    /// Station-type universe.
    pub types: Vec<String>,
    pub trains: Vec<TrainChart>,
    /// Dispatch rotation as train labels.
    pub rotation: Vec<String>,
}

impl MultiTrainChart {
    pub fn single(chart: BarChart) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            types: chart.bars.iter().map(|b| b.label.clone()).collect(),
            trains: vec![TrainChart { label: "1".into(), chart }],
            rotation: vec!["1".into()],
        }
    }

    pub fn new(types: Vec<String>, trains: Vec<TrainChart>) -> Result<Self, SFamilyError> {
        let rotation = trains.iter().map(|t| t.label.clone()).collect();
        let multi = Self { schema_version: SCHEMA_VERSION, types, trains, rotation };
        multi.validate()?;
        Ok(multi)
    }

    pub fn type_index(&self, label: &str) -> Option<usize> {
        self.types.iter().position(|t| t == label)
    }

    /// Bar index on chart `k` for universe type `i`.
    pub fn bar_of(&self, k: usize, i: usize) -> Option<usize> {
        self.trains[k].chart.position(&self.types[i])
    }

    pub fn validate(&self) -> Result<(), SFamilyError> {
        let bad = |m: String| Err(SFamilyError::InvalidChart(m));
        if self.trains.is_empty() {
            return bad("no train types".into());
        }
        let universe: BTreeSet<&str> = self.types.iter().map(String::as_str).collect();
        if universe.len() != self.types.len() {
            return bad("station-type labels must be unique".into());
        }
        let m = self.trains[0].chart.m;
        let mut train_labels = BTreeSet::new();
        let mut lengths: BTreeMap<&str, u32> = BTreeMap::new();
        for t in &self.trains {
            t.chart.validate()?;
            if !train_labels.insert(t.label.as_str()) {
                return bad(format!("duplicate train label {}", t.label));
            }
            if t.chart.m != m {
                return bad("all charts must share the train length M".into());
            }
            for bar in &t.chart.bars {
                if !universe.contains(bar.label.as_str()) {
                    return bad(format!("bar {} is not a known station type", bar.label));
                }
                if *lengths.entry(&bar.label).or_insert(bar.d) != bar.d {
                    return bad(format!("bar {} has different lengths across charts", bar.label));
                }
            }
        }
        if let Some(r) = self.rotation.iter().find(|r| !train_labels.contains(r.as_str())) {
            return bad(format!("rotation names unknown train {r}"));
        }
        Ok(())
    }

    /// Platform length per universe type (1 when the type is skipped everywhere).
    pub fn platform_lengths(&self) -> Vec<u32> {
        (0..self.types.len())
            .map(|i| {
                (0..self.trains.len())
                    .filter_map(|k| self.bar_of(k, i).map(|b| self.trains[k].chart.bars[b].d))
                    .max()
                    .unwrap_or(1)
            })
            .collect()
    }
}
