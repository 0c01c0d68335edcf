//! Versioned JSON files for specs, lines, charts and entry rates.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::model::{LineInstance, ModelError, ProtocolSpec};
use crate::rational::{serde_q_vec, Q};
use crate::sfamily::{BarChart, MultiTrainChart};
use crate::SCHEMA_VERSION;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema version {found} is not supported (expected {expected})")]
    SchemaVersion { found: u64, expected: u32 },
    #[error("missing schema_version")]
    MissingVersion,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid chart: {0}")]
    Chart(String),
}

/// Entry rates `E_s` per station, per hour.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRates {
    pub schema_version: u32,
    #[serde(rename = "E", with = "serde_q_vec")]
    pub entries: Vec<Q>,
}

fn check_version(value: &serde_json::Value) -> Result<(), IoError> {
    match value.get("schema_version").and_then(serde_json::Value::as_u64) {
        Some(v) if v == SCHEMA_VERSION as u64 => Ok(()),
        Some(v) => Err(IoError::SchemaVersion { found: v, expected: SCHEMA_VERSION }),
        None => Err(IoError::MissingVersion),
    }
}

fn parse_versioned<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    check_version(&value)?;
    Ok(serde_json::from_value(value)?)
}

pub fn parse_spec(text: &str) -> Result<ProtocolSpec, IoError> {
    let spec: ProtocolSpec = parse_versioned(text)?;
    spec.validate()?;
    Ok(spec)
}

pub fn parse_line(text: &str) -> Result<LineInstance, IoError> {
    let line: LineInstance = parse_versioned(text)?;
    line.validate()?;
    Ok(line)
}

/// A multi-train chart, or a bare single-train chart `{"M": .., "bars": [..]}`.
pub fn parse_chart(text: &str) -> Result<MultiTrainChart, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let multi = if value.get("trains").is_some() {
        check_version(&value)?;
        serde_json::from_value(value)?
    } else {
        MultiTrainChart::single(serde_json::from_value::<BarChart>(value)?)
    };
    multi.validate().map_err(|e| IoError::Chart(e.to_string()))?;
    Ok(multi)
}

pub fn parse_rates(text: &str) -> Result<Vec<Q>, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.is_array() {
        let rates: EntryRates =
            serde_json::from_value(serde_json::json!({ "schema_version": SCHEMA_VERSION, "E": value }))?;
        return Ok(rates.entries);
    }
    check_version(&value)?;
    Ok(serde_json::from_value::<EntryRates>(value)?.entries)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

pub fn load_spec(path: &Path) -> Result<ProtocolSpec, IoError> {
    parse_spec(&read_text(path)?)
}

pub fn load_line(path: &Path) -> Result<LineInstance, IoError> {
    parse_line(&read_text(path)?)
}

pub fn load_chart(path: &Path) -> Result<MultiTrainChart, IoError> {
    parse_chart(&read_text(path)?)
}

pub fn load_rates(path: &Path) -> Result<Vec<Q>, IoError> {
    parse_rates(&read_text(path)?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    std::fs::write(path, to_json(value)?).map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

/// Rows are links, columns are sections; values are exact rationals.
pub fn profile_csv(profile: &crate::flow::LoadProfile) -> String {
    let mut out = String::from("link");
    for n in 0..profile.load.len() {
        out.push_str(&format!(",section_{}", n + 1));
    }
    out.push('\n');
    for s in 0..profile.num_links() {
        out.push_str(&(s + 1).to_string());
        for row in &profile.load {
            out.push(',');
            out.push_str(&crate::rational::display_q(&row[s]));
        }
        out.push('\n');
    }
    out
}

/// `None` cells are written empty.
pub fn matrix_csv(labels: &[String], cells: &[Vec<Option<usize>>]) -> String {
    let mut out = String::from("from");
    for l in labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(cells) {
        out.push_str(l);
        for c in row {
            out.push(',');
            if let Some(v) = c {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}
