//! The binary decision tables, stored as nested 0/1 arrays exactly as they
//! appear on the wire. Lookups outside the stored shape read as 0.

use serde::{Deserialize, Serialize};

use super::ModelError;

fn bit(v: Option<&u8>) -> bool {
    matches!(v, Some(1))
}

fn check_binary<'a>(table: &'static str, cells: impl Iterator<Item = (&'a u8, String)>) -> Result<(), ModelError> {
    for (v, at) in cells {
        if *v > 1 {
            return Err(ModelError::NonBinary { table, at });
        }
    }
    Ok(())
}

/// `delta[s][i]`: station `s` is of type `i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StationClassification(pub Vec<Vec<u8>>);

impl StationClassification {
    pub fn from_type_indices(types: &[usize], num_types: usize) -> Self {
        Self(types.iter().map(|&t| (0..num_types).map(|i| u8::from(i == t)).collect()).collect())
    }

    pub fn num_stations(&self) -> usize {
        self.0.len()
    }

    pub fn is(&self, s: usize, i: usize) -> bool {
        bit(self.0.get(s).and_then(|r| r.get(i)))
    }

    /// Type index of station `s`, if its row has exactly one 1.
    pub fn type_of(&self, s: usize) -> Option<usize> {
        let row = self.0.get(s)?;
        let mut hits = row.iter().enumerate().filter(|(_, &v)| v == 1);
        let first = hits.next()?.0;
        hits.next().is_none().then_some(first)
    }

    pub fn type_indices(&self) -> Option<Vec<usize>> {
        (0..self.0.len()).map(|s| self.type_of(s)).collect()
    }

    pub(crate) fn validate(&self, num_types: usize) -> Result<(), ModelError> {
        for (s, row) in self.0.iter().enumerate() {
            if row.len() != num_types {
                return Err(ModelError::DimensionMismatch(format!(
                    "delta row {} has {} entries, expected {num_types}",
                    s + 1,
                    row.len()
                )));
            }
            check_binary("delta", row.iter().map(|v| (v, format!("s={}", s + 1))))?;
            let sum: u32 = row.iter().map(|&v| u32::from(v)).sum();
            if sum != 1 {
                return Err(ModelError::RowSumViolation { table: "delta", row: s + 1, sum });
            }
        }
        Ok(())
    }
}

/// `epsilon[t][k]`: train `t` is of type `k`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TrainSequence(pub Vec<Vec<u8>>);

impl TrainSequence {
    pub fn rotation(types: &[usize], num_types: usize) -> Self {
        Self(StationClassification::from_type_indices(types, num_types).0)
    }

    pub fn type_of(&self, t: usize) -> Option<usize> {
        StationClassification(self.0.clone()).type_of(t)
    }

    pub(crate) fn validate(&self, num_types: usize) -> Result<(), ModelError> {
        for (t, row) in self.0.iter().enumerate() {
            if row.len() != num_types {
                return Err(ModelError::DimensionMismatch(format!(
                    "epsilon row {} has {} entries, expected {num_types}",
                    t + 1,
                    row.len()
                )));
            }
            check_binary("epsilon", row.iter().map(|v| (v, format!("t={}", t + 1))))?;
            let sum: u32 = row.iter().map(|&v| u32::from(v)).sum();
            if sum != 1 {
                return Err(ModelError::RowSumViolation { table: "epsilon", row: t + 1, sum });
            }
        }
        Ok(())
    }
}

/// `u[k][m][n]`: unit `m` of train type `k` is in section `n`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SectionDefinition(pub Vec<Vec<Vec<u8>>>);

impl SectionDefinition {
    pub fn at(&self, k: usize, m: usize, n: usize) -> bool {
        bit(self.0.get(k).and_then(|t| t.get(m)).and_then(|r| r.get(n)))
    }

    /// Table for one train type whose consecutive sections have the given unit counts.
    pub fn from_sizes(sizes: &[u32]) -> Vec<Vec<u8>> {
        let n_sec = sizes.len();
        let mut rows = Vec::new();
        for (n, &size) in sizes.iter().enumerate() {
            for _ in 0..size {
                rows.push((0..n_sec).map(|j| u8::from(j == n)).collect());
            }
        }
        rows
    }
}

/// `s[k][i]`: trains of type `k` stop at stations of type `i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StopTable(pub Vec<Vec<u8>>);

impl StopTable {
    pub fn at(&self, k: usize, i: usize) -> bool {
        bit(self.0.get(k).and_then(|r| r.get(i)))
    }
}

/// `a[k][n][i]`: section `n` of type-`k` trains aligns at type-`i` stations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlignmentTable(pub Vec<Vec<Vec<u8>>>);

impl AlignmentTable {
    pub fn at(&self, k: usize, n: usize, i: usize) -> bool {
        bit(self.0.get(k).and_then(|t| t.get(n)).and_then(|r| r.get(i)))
    }
}

/// `v[k][n][i]`: section `n` of type-`k` trains opens its doors at type-`i` stations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DisembarkationTable(pub Vec<Vec<Vec<u8>>>);

impl DisembarkationTable {
    pub fn at(&self, k: usize, n: usize, i: usize) -> bool {
        bit(self.0.get(k).and_then(|t| t.get(n)).and_then(|r| r.get(i)))
    }
}

/// `p[k][n][i][j]`: section `n` of type-`k` trains presents type-`j`
/// destinations at type-`i` stations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PresentationTable(pub Vec<Vec<Vec<Vec<u8>>>>);

impl PresentationTable {
    pub fn at(&self, k: usize, n: usize, i: usize, j: usize) -> bool {
        bit(self.0.get(k).and_then(|t| t.get(n)).and_then(|r| r.get(i)).and_then(|r| r.get(j)))
    }

    pub fn set(&mut self, k: usize, n: usize, i: usize, j: usize, on: bool) {
        self.0[k][n][i][j] = u8::from(on);
    }
}

pub(crate) fn check_binary_3(table: &'static str, t: &[Vec<Vec<u8>>]) -> Result<(), ModelError> {
    for (k, a) in t.iter().enumerate() {
        for (x, row) in a.iter().enumerate() {
            check_binary(table, row.iter().enumerate().map(|(y, v)| (v, format!("k={},{},{}", k + 1, x + 1, y + 1))))?;
        }
    }
    Ok(())
}

pub(crate) fn check_binary_2(table: &'static str, t: &[Vec<u8>]) -> Result<(), ModelError> {
    for (x, row) in t.iter().enumerate() {
        check_binary(table, row.iter().enumerate().map(|(y, v)| (v, format!("{},{}", x + 1, y + 1))))?;
    }
    Ok(())
}
