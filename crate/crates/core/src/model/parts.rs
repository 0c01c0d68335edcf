use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::ProtocolSpec;

/// Maximal run of consecutive sections sharing one destination-label set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainPart {
    pub index: usize,
    /// First and last section (0-based, inclusive).
    pub first: usize,
    pub last: usize,
    /// Station types whose stations every section of the part aligns at.
    pub labels: BTreeSet<usize>,
}

impl TrainPart {
    pub fn sections(&self) -> std::ops::RangeInclusive<usize> {
        self.first..=self.last
    }
}

/// Splits the sections of train type `k` into parts by alignment label set.
pub fn derive_parts(spec: &ProtocolSpec, k: usize) -> Vec<TrainPart> {
    let mut parts: Vec<TrainPart> = Vec::new();
    for n in 0..spec.num_sections(k) {
        let labels = spec.label_set(k, n);
        match parts.last_mut() {
            Some(p) if p.labels == labels => p.last = n,
            _ => parts.push(TrainPart { index: parts.len(), first: n, last: n, labels }),
        }
    }
    parts
}
