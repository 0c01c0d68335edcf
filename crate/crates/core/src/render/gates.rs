//! Platform gate signs derived from alignment and presentation tables.

use serde::{Deserialize, Serialize};

use crate::model::{LineInstance, ProtocolSpec};
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "sign", content = "destinations", rename_all = "snake_case")]
pub enum Sign {
    /// Board here for these station types.
    Embark(Vec<String>),
    /// Doors open for alighting only.
    Exit,
    /// No door of this train stops at the gate.
    NoTrain,
}

impl Sign {
    fn text(&self) -> String {
        match self {
            Sign::Embark(ls) if ls.len() == 1 => ls[0].clone(),
            Sign::Embark(ls) => format!("{{{}}}", ls.join(",")),
            Sign::Exit => "X".into(),
            Sign::NoTrain => "-".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gate {
    /// Unit facing the gate, 0 = front of the train.
    pub unit: Option<usize>,
    pub section: Option<usize>,
    #[serde(flatten)]
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainSigns {
    pub train: String,
    /// Gates from the front end of the platform.
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StationSigns {
    pub station: String,
    pub station_type: String,
    pub trains: Vec<TrainSigns>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSignTable {
    pub schema_version: u32,
    pub stations: Vec<StationSigns>,
}

impl GateSignTable {
    /// One line per station and train type; `|` separates sections.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for st in &self.stations {
            for t in &st.trains {
                let mut cells = String::new();
                let mut prev: Option<Option<usize>> = None;
                for g in &t.gates {
                    if let Some(p) = prev {
                        cells.push_str(if p != g.section { " | " } else { "," });
                    }
                    cells.push_str(&g.sign.text());
                    prev = Some(g.section);
                }
                out.push_str(&format!("{} [{}] train {}: {}\n", st.station, st.station_type, t.train, cells));
            }
        }
        out
    }
}

/// Gates facing train `k` at a station of type `i` with a `platform`-unit platform.
///
/// The aligned block sits flush with the platform front when it contains the
/// first section, flush with the rear when it contains the last, and flush
/// with the front otherwise.
fn train_gates(spec: &ProtocolSpec, k: usize, i: usize, platform: usize) -> Vec<Gate> {
    let no_train = || Gate { unit: None, section: None, sign: Sign::NoTrain };
    let n_sec = spec.num_sections(k);
    let aligned: Vec<usize> = (0..n_sec).filter(|&n| spec.a.at(k, n, i)).collect();
    if !spec.s.at(k, i) || aligned.is_empty() {
        return vec![no_train(); platform];
    }
    let mut units: Vec<usize> = aligned.iter().flat_map(|&n| spec.section_units(k, n)).collect();
    units.sort_unstable();
    let rear_flush = !aligned.contains(&0) && aligned.contains(&(n_sec - 1));
    let offset = if rear_flush { platform as isize - units.len() as isize } else { 0 };
    (0..platform)
        .map(|g| {
            let pos = g as isize - offset;
            if pos < 0 || pos as usize >= units.len() {
                return no_train();
            }
            let m = units[pos as usize];
            let n = spec.section_of_unit(k, m).unwrap_or(0);
            let presented: Vec<String> = (0..spec.num_types())
                .filter(|&j| spec.p.at(k, n, i, j))
                .map(|j| spec.stations.labels[j].clone())
                .collect();
            let sign = if !spec.v.at(k, n, i) || presented.is_empty() { Sign::Exit } else { Sign::Embark(presented) };
            Gate { unit: Some(m), section: Some(n), sign }
        })
        .collect()
}

/// Gate signs per station and train type. Without a line, one station of
/// each type is shown on a platform of its catalog length.
pub fn derive_gate_signs(spec: &ProtocolSpec, line: Option<&LineInstance>) -> GateSignTable {
    let stations: Vec<(String, usize, usize)> = match (line, spec.delta.type_indices()) {
        (Some(line), Some(types)) if types.len() == line.num_stations() => {
            (0..types.len()).map(|s| (line.stations[s].clone(), types[s], line.platforms[s] as usize)).collect()
        }
        _ => (0..spec.num_types()).map(|i| (spec.stations.labels[i].clone(), i, spec.stations.d[i] as usize)).collect(),
    };
    let stations = stations
        .into_iter()
        .map(|(station, i, platform)| StationSigns {
            station,
            station_type: spec.stations.labels[i].clone(),
            trains: (0..spec.trains.len())
                .map(|k| TrainSigns { train: spec.trains[k].label.clone(), gates: train_gates(spec, k, i, platform) })
                .collect(),
        })
        .collect();
    GateSignTable { schema_version: SCHEMA_VERSION, stations }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateViolation {
    pub station: String,
    pub train: String,
    pub gate: usize,
    pub detail: String,
}

/// Every destination advertised at a gate must be reachable in the same
/// section: the train stops there, the section is aligned and its doors
/// open. Signs must also agree with the presentation table.
pub fn check_gate_consistency(spec: &ProtocolSpec, table: &GateSignTable) -> Vec<GateViolation> {
    let mut out = Vec::new();
    for st in &table.stations {
        let Ok(i) = spec.type_index(&st.station_type) else {
            continue;
        };
        for (k, t) in st.trains.iter().enumerate() {
            for (g, gate) in t.gates.iter().enumerate() {
                let mut fail = |detail: String| {
                    out.push(GateViolation { station: st.station.clone(), train: t.train.clone(), gate: g, detail })
                };
                let Some(n) = gate.section else {
                    continue;
                };
                if !spec.a.at(k, n, i) {
                    fail(format!("section {} faces the gate but is not aligned", n + 1));
                }
                let Sign::Embark(dests) = &gate.sign else {
                    continue;
                };
                for l in dests {
                    let Ok(j) = spec.type_index(l) else {
                        fail(format!("unknown destination {l}"));
                        continue;
                    };
                    if !spec.p.at(k, n, i, j) {
                        fail(format!("{l} advertised but section {} does not present it", n + 1));
                    }
                    if !spec.s.at(k, j) || !spec.a.at(k, n, j) || !spec.v.at(k, n, j) {
                        fail(format!("passengers for {l} cannot alight from section {}", n + 1));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fr_h, fr_i};

    fn row(table: &GateSignTable, station: &str) -> String {
        let text = table.to_text();
        text.lines().find(|l| l.starts_with(&format!("{station} "))).unwrap().split(": ").nth(1).unwrap().to_string()
    }

    #[test]
    fn fr_i_gates_at_f() {
        let spec = fr_i(&[3, 3, 3, 3]).unwrap();
        let table = derive_gate_signs(&spec, None);
        assert_eq!(row(&table, "F"), "F,F,F | R,R,R | X,X,X");
        assert_eq!(row(&table, "R"), "X,X,X | F,F,F | R,R,R");
        assert!(check_gate_consistency(&spec, &table).is_empty());
    }

    #[test]
    fn fr_h_gates_at_f() {
        let spec = fr_h();
        let table = derive_gate_signs(&spec, None);
        assert_eq!(row(&table, "F"), "F,F,F | {F,R},{F,R},{F,R} | {F,R},{F,R},{F,R}");
    }

    #[test]
    fn closed_doors_show_exit() {
        let mut spec = fr_h();
        spec.v.0[0][0][0] = 0;
        for j in 0..2 {
            spec.p.set(0, 0, 0, j, false);
        }
        let table = derive_gate_signs(&spec, None);
        assert!(row(&table, "F").starts_with("X,X,X | "));
    }

    #[test]
    fn tampered_sign_is_caught() {
        let spec = fr_i(&[3, 3, 3, 3]).unwrap();
        let mut table = derive_gate_signs(&spec, None);
        table.stations[0].trains[0].gates[0].sign = Sign::Embark(vec!["R".into()]);
        // section 1 neither presents R nor aligns there
        assert_eq!(check_gate_consistency(&spec, &table).len(), 2);
    }
}
