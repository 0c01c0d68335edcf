use serde::{Deserialize, Serialize};

use super::outer::DEFAULT_CAP;
use crate::flow::LoadProfile;
use crate::model::{LineInstance, ProtocolSpec};
use crate::rational::{serde_q, serde_q_vec, Q};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Total entries per hour, `Σ_s E_s`.
    #[default]
    Entries,
    /// Passenger-km per hour, weighting each trip by its link lengths.
    PassengerKm,
}

/// A line, a single-train protocol and the decisions left open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeteringProblem {
    pub line: LineInstance,
    /// Protocol tables; `delta` and the section sizes are the starting point
    /// when classification or sizing is fixed.
    pub spec: ProtocolSpec,
    pub objective: Objective,
    pub classify_stations: bool,
    pub size_sections: bool,
    /// Largest number of (classification, sizing) candidates to enumerate.
    pub cap: u128,
}

impl MeteringProblem {
    pub fn new(line: LineInstance, spec: ProtocolSpec) -> Self {
        Self {
            line,
            spec,
            objective: Objective::Entries,
            classify_stations: false,
            size_sections: false,
            cap: DEFAULT_CAP,
        }
    }

    pub fn classify_stations(mut self, on: bool) -> Self {
        self.classify_stations = on;
        self
    }

    pub fn size_sections(mut self, on: bool) -> Self {
        self.size_sections = on;
        self
    }

    pub fn objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }
}

/// A bound or capacity constraint holding with equality at the optimum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Binding {
    /// `E_s = M_s`.
    MinRate { station: usize },
    /// `E_s = A_s`.
    Demand { station: usize },
    /// Section `section` is full on the link departing `station`.
    Capacity { section: usize, station: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeteringSolution {
    /// `E_s` per station, per hour.
    #[serde(with = "serde_q_vec")]
    pub entries: Vec<Q>,
    /// Station type label per station.
    pub classification: Vec<String>,
    /// Section sizes in units, front to rear.
    pub section_sizes: Vec<u32>,
    #[serde(with = "serde_q")]
    pub objective: Q,
    pub profile: LoadProfile,
    /// Stations and sections are 0-based.
    pub binding: Vec<Binding>,
}
