use std::collections::BTreeSet;

use num::Zero;
use serde::{Deserialize, Serialize};

use super::tables::*;
use super::ModelError;
use crate::rational::{q, serde_q_vec, Q};
use crate::SCHEMA_VERSION;

/// Station types and the shortest platform of each type, in units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StationTypeCatalog {
    pub labels: Vec<String>,
    pub d: Vec<u32>,
}

impl StationTypeCatalog {
    pub fn new<S: Into<String>>(types: impl IntoIterator<Item = (S, u32)>) -> Self {
        let (labels, d) = types.into_iter().map(|(l, d)| (l.into(), d)).unzip();
        Self { labels, d }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.labels.len() != self.d.len() {
            return Err(ModelError::DimensionMismatch(format!(
                "{} station-type labels but {} platform lengths",
                self.labels.len(),
                self.d.len()
            )));
        }
        let unique: BTreeSet<_> = self.labels.iter().collect();
        if unique.len() != self.labels.len() {
            return Err(ModelError::InvalidCatalog("station-type labels must be unique".into()));
        }
        if let Some(pos) = self.d.iter().position(|&d| d == 0) {
            return Err(ModelError::InvalidCatalog(format!(
                "platform length of type {} must be at least 1",
                self.labels[pos]
            )));
        }
        Ok(())
    }
}

/// Composition of one train type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainTypeSpec {
    pub label: String,
    #[serde(rename = "M")]
    pub units: usize,
    /// Per-unit length `l_km`, in platform units.
    #[serde(rename = "l", with = "serde_q_vec")]
    pub unit_length: Vec<Q>,
    /// Per-unit passenger capacity `c_km`.
    #[serde(rename = "c", with = "serde_q_vec")]
    pub unit_capacity: Vec<Q>,
    #[serde(rename = "N")]
    pub sections: usize,
    /// 1-based unit indices that are never aligned with a platform (doorless end units).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub never_aligned: Vec<usize>,
}

impl TrainTypeSpec {
    /// Homogeneous train with unit length 1 and the given per-unit capacity.
    pub fn uniform(label: impl Into<String>, units: usize, sections: usize, capacity: Q) -> Self {
        Self {
            label: label.into(),
            units,
            unit_length: vec![q(1); units],
            unit_capacity: vec![capacity; units],
            sections,
            never_aligned: Vec::new(),
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.sections == 0 || self.sections > self.units {
            return Err(ModelError::DimensionMismatch(format!(
                "train type {}: need 1 <= N ({}) <= M ({})",
                self.label, self.sections, self.units
            )));
        }
        if self.unit_length.len() != self.units || self.unit_capacity.len() != self.units {
            return Err(ModelError::DimensionMismatch(format!(
                "train type {}: per-unit length/capacity lists must have M = {} entries",
                self.label, self.units
            )));
        }
        if self.unit_length.iter().any(|l| l <= &Q::zero()) {
            return Err(ModelError::DimensionMismatch(format!(
                "train type {}: unit lengths must be positive",
                self.label
            )));
        }
        if self.unit_capacity.iter().any(|c| c < &Q::zero()) {
            return Err(ModelError::DimensionMismatch(format!(
                "train type {}: unit capacities must be nonnegative",
                self.label
            )));
        }
        if let Some(&m) = self.never_aligned.iter().find(|&&m| m == 0 || m > self.units) {
            return Err(ModelError::DimensionMismatch(format!(
                "train type {}: never-aligned unit {m} out of range",
                self.label
            )));
        }
        Ok(())
    }
}

/// End-of-line rule: station types allowed at the first and last stations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EolRule {
    pub first: Vec<String>,
    pub last: Vec<String>,
}

/// The seven decision tables, before validation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProtocolTables {
    pub delta: StationClassification,
    pub epsilon: TrainSequence,
    pub u: SectionDefinition,
    pub s: StopTable,
    pub a: AlignmentTable,
    pub v: DisembarkationTable,
    pub p: PresentationTable,
}

/// A complete protocol: catalogs plus the seven tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub schema_version: u32,
    pub stations: StationTypeCatalog,
    pub trains: Vec<TrainTypeSpec>,
    #[serde(default)]
    pub delta: StationClassification,
    pub epsilon: TrainSequence,
    pub u: SectionDefinition,
    pub s: StopTable,
    pub a: AlignmentTable,
    pub v: DisembarkationTable,
    pub p: PresentationTable,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eol: Option<EolRule>,
}

/// Assembles and validates a protocol.
pub fn build_protocol(
    stations: StationTypeCatalog,
    trains: Vec<TrainTypeSpec>,
    tables: ProtocolTables,
) -> Result<ProtocolSpec, ModelError> {
    let spec = assemble(stations, trains, tables);
    spec.validate()?;
    Ok(spec)
}

/// Packs catalogs and tables without validating them.
pub(crate) fn assemble(
    stations: StationTypeCatalog,
    trains: Vec<TrainTypeSpec>,
    tables: ProtocolTables,
) -> ProtocolSpec {
    ProtocolSpec {
        schema_version: SCHEMA_VERSION,
        stations,
        trains,
        delta: tables.delta,
        epsilon: tables.epsilon,
        u: tables.u,
        s: tables.s,
        a: tables.a,
        v: tables.v,
        p: tables.p,
        eol: None,
    }
}

impl ProtocolSpec {
    pub fn num_types(&self) -> usize {
        self.stations.len()
    }

    pub fn num_train_types(&self) -> usize {
        self.trains.len()
    }

    pub fn num_sections(&self, k: usize) -> usize {
        self.trains[k].sections
    }

    pub fn type_label(&self, i: usize) -> &str {
        &self.stations.labels[i]
    }

    pub fn type_index(&self, label: &str) -> Result<usize, ModelError> {
        self.stations.index(label).ok_or_else(|| ModelError::UnknownLabel(label.to_string()))
    }

    /// Replaces the station classification with one built from type labels.
    pub fn classify<S: AsRef<str>>(mut self, labels: &[S]) -> Result<Self, ModelError> {
        let idx = labels.iter().map(|l| self.type_index(l.as_ref())).collect::<Result<Vec<_>, _>>()?;
        self.delta = StationClassification::from_type_indices(&idx, self.num_types());
        Ok(self)
    }

    pub fn with_eol(mut self, first: &[&str], last: &[&str]) -> Self {
        self.eol = Some(EolRule {
            first: first.iter().map(|s| s.to_string()).collect(),
            last: last.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    /// 0-based unit indices of section `n` of train type `k`, front to rear.
    pub fn section_units(&self, k: usize, n: usize) -> Vec<usize> {
        (0..self.trains[k].units).filter(|&m| self.u.at(k, m, n)).collect()
    }

    pub fn section_of_unit(&self, k: usize, m: usize) -> Option<usize> {
        (0..self.trains[k].sections).find(|&n| self.u.at(k, m, n))
    }

    /// Section sizes in units, front to rear.
    pub fn section_sizes(&self, k: usize) -> Vec<u32> {
        (0..self.trains[k].sections).map(|n| self.section_units(k, n).len() as u32).collect()
    }

    /// `C_n`: summed unit capacity of a section.
    pub fn section_capacity(&self, k: usize, n: usize) -> Q {
        self.section_units(k, n).into_iter().map(|m| self.trains[k].unit_capacity[m].clone()).sum()
    }

    pub fn section_length(&self, k: usize, n: usize) -> Q {
        self.section_units(k, n).into_iter().map(|m| self.trains[k].unit_length[m].clone()).sum()
    }

    /// Station types a section visits (its alignment label set).
    pub fn label_set(&self, k: usize, n: usize) -> BTreeSet<usize> {
        (0..self.num_types()).filter(|&i| self.a.at(k, n, i)).collect()
    }

    /// Sections of `k` that contain a never-aligned unit.
    pub fn doorless_sections(&self, k: usize) -> BTreeSet<usize> {
        self.trains[k].never_aligned.iter().filter_map(|&m| self.section_of_unit(k, m - 1)).collect()
    }

    /// Full-presentation tables derived from alignment: `v = a`, `p_nij = a_ni a_nj`.
    pub fn static_presentation(&mut self) {
        self.v = DisembarkationTable(self.a.0.clone());
        self.p = PresentationTable(
            self.a
                .0
                .iter()
                .map(|sec| {
                    sec.iter()
                        .map(|row| row.iter().map(|&ai| row.iter().map(|&aj| ai & aj).collect()).collect())
                        .collect()
                })
                .collect(),
        );
    }

    /// Rebuilds `u` for a single train type from consecutive section sizes.
    pub fn resize_sections(&mut self, k: usize, sizes: &[u32]) -> Result<(), ModelError> {
        if sizes.len() != self.trains[k].sections {
            return Err(ModelError::BadSectionCount(sizes.len()));
        }
        if sizes.contains(&0) {
            return Err(ModelError::EmptySection { train: k + 1, section: 0 });
        }
        let units: usize = sizes.iter().map(|&s| s as usize).sum();
        let t = &mut self.trains[k];
        if units != t.units {
            let l = t.unit_length.first().cloned().unwrap_or_else(|| q(1));
            let c = t.unit_capacity.first().cloned().unwrap_or_else(Q::zero);
            t.unit_length = vec![l; units];
            t.unit_capacity = vec![c; units];
            t.units = units;
        }
        self.u.0[k] = SectionDefinition::from_sizes(sizes);
        Ok(())
    }

    /// Checks every structural invariant of the tables.
    pub fn validate(&self) -> Result<(), ModelError> {
        self.stations.validate()?;
        let c = self.num_types();
        let kk = self.trains.len();
        if kk == 0 {
            return Err(ModelError::DimensionMismatch("no train types".into()));
        }
        for t in &self.trains {
            t.validate()?;
        }
        self.delta.validate(c)?;
        self.epsilon.validate(kk)?;
        let dims = |name: &str, got: usize, want: usize| -> Result<(), ModelError> {
            if got == want {
                Ok(())
            } else {
                Err(ModelError::DimensionMismatch(format!("{name}: found {got} entries, expected {want}")))
            }
        };
        dims("u (train types)", self.u.0.len(), kk)?;
        dims("s (train types)", self.s.0.len(), kk)?;
        dims("a (train types)", self.a.0.len(), kk)?;
        dims("v (train types)", self.v.0.len(), kk)?;
        dims("p (train types)", self.p.0.len(), kk)?;
        check_binary_2("s", &self.s.0)?;
        for (k, t) in self.trains.iter().enumerate() {
            let tag = |x: &str| format!("{x} for train type {}", t.label);
            dims(&tag("u units"), self.u.0[k].len(), t.units)?;
            for row in &self.u.0[k] {
                dims(&tag("u sections"), row.len(), t.sections)?;
            }
            dims(&tag("s station types"), self.s.0[k].len(), c)?;
            for (table, name) in [(&self.a.0[k], "a"), (&self.v.0[k], "v")] {
                dims(&tag(&format!("{name} sections")), table.len(), t.sections)?;
                for row in table {
                    dims(&tag(&format!("{name} station types")), row.len(), c)?;
                }
            }
            dims(&tag("p sections"), self.p.0[k].len(), t.sections)?;
            for sec in &self.p.0[k] {
                dims(&tag("p station types"), sec.len(), c)?;
                for row in sec {
                    dims(&tag("p destination types"), row.len(), c)?;
                }
            }
        }
        check_binary_3("u", &self.u.0)?;
        check_binary_3("a", &self.a.0)?;
        check_binary_3("v", &self.v.0)?;
        for (k, t) in self.p.0.iter().enumerate() {
            check_binary_3("p", t).map_err(|e| match e {
                ModelError::NonBinary { table, at } => ModelError::NonBinary { table, at: format!("k={},{at}", k + 1) },
                other => other,
            })?;
        }

        for (k, t) in self.trains.iter().enumerate() {
            for m in 0..t.units {
                let n_in: usize = (0..t.sections).filter(|&n| self.u.at(k, m, n)).count();
                if n_in != 1 {
                    return Err(ModelError::UnitPartition { train: k + 1, unit: m + 1, sections: n_in });
                }
            }
            for n in 0..t.sections {
                let units = self.section_units(k, n);
                let (Some(&lo), Some(&hi)) = (units.first(), units.last()) else {
                    return Err(ModelError::EmptySection { train: k + 1, section: n + 1 });
                };
                if hi - lo + 1 != units.len() {
                    return Err(ModelError::NonConsecutiveSection { train: k + 1, section: n + 1 });
                }
            }
            for n in self.doorless_sections(k) {
                if let Some(i) = (0..c).find(|&i| self.a.at(k, n, i)) {
                    return Err(ModelError::DoorlessSectionAligned {
                        train: k + 1,
                        section: n + 1,
                        station_type: self.stations.labels[i].clone(),
                    });
                }
            }
        }
        if let Some(rule) = &self.eol {
            for l in rule.first.iter().chain(&rule.last) {
                self.type_index(l)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fr_h, trivial};

    #[test]
    fn non_consecutive_section_is_rejected() {
        let mut spec = fr_h();
        // units 1..4 front to rear: 1,2 -> s1; 3 -> s2; 4 -> s1
        spec.u.0[0][1] = vec![1, 0, 0, 0];
        spec.u.0[0][2] = vec![0, 1, 0, 0];
        spec.u.0[0][3] = vec![1, 0, 0, 0];
        assert!(matches!(spec.validate(), Err(ModelError::NonConsecutiveSection { train: 1, section: 1 })));
    }

    #[test]
    fn delta_row_sum_is_checked() {
        let mut spec = fr_h();
        spec.delta = StationClassification(vec![vec![1, 1]]);
        assert!(matches!(spec.validate(), Err(ModelError::RowSumViolation { table: "delta", row: 1, sum: 2 })));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut spec = fr_h();
        spec.a.0[0].pop();
        assert!(matches!(spec.validate(), Err(ModelError::DimensionMismatch(_))));
    }

    #[test]
    fn non_binary_entry_is_reported() {
        let mut spec = fr_h();
        spec.v.0[0][0][0] = 2;
        assert!(matches!(spec.validate(), Err(ModelError::NonBinary { table: "v", .. })));
    }

    #[test]
    fn doorless_unit_cannot_align() {
        let mut spec = fr_h();
        spec.trains[0].never_aligned = vec![1];
        assert!(matches!(spec.validate(), Err(ModelError::DoorlessSectionAligned { section: 1, .. })));
    }

    #[test]
    fn classify_and_round_trip() {
        let spec = fr_h().classify(&["R", "F", "R", "F"]).unwrap();
        assert_eq!(spec.delta.type_indices(), Some(vec![1, 0, 1, 0]));
        let text = serde_json::to_string(&spec).unwrap();
        let back: ProtocolSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert!(fr_h().classify(&["Q"]).is_err());
    }

    #[test]
    fn degenerate_single_class_system_is_valid() {
        let spec = trivial(3, 3).unwrap();
        assert_eq!(spec.section_capacity(0, 0), q(3));
    }
}
