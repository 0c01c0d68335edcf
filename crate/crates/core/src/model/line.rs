use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::rational::{serde_q, serde_q_mat, serde_q_opt_vec, serde_q_vec, Q};
use crate::SCHEMA_VERSION;

/// One direction of a line: ordered stations, platforms, headway and steady-state demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineInstance {
    pub schema_version: u32,
    /// Station IDs in travel order.
    pub stations: Vec<String>,
    /// Platform length per station, in units.
    pub platforms: Vec<u32>,
    /// Headway in hours.
    #[serde(rename = "H", with = "serde_q")]
    pub headway: Q,
    /// O-D demand `A[s][s']` in passengers per hour.
    #[serde(rename = "A", with = "serde_q_mat")]
    pub demand: Vec<Vec<Q>>,
    /// Minimum entry rates `M_s`.
    #[serde(rename = "M_min", with = "serde_q_vec")]
    pub min_rates: Vec<Q>,
    /// Link lengths, used by the passenger-km objective; defaults to 1 per link.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_q_opt_vec")]
    pub link_length: Option<Vec<Q>>,
}

impl LineInstance {
    /// Line with stations `1..=S`, uniform platforms and zero minimum rates.
    pub fn new(platform: u32, headway: Q, demand: Vec<Vec<Q>>) -> Self {
        let s = demand.len();
        Self {
            schema_version: SCHEMA_VERSION,
            stations: (1..=s).map(|i| i.to_string()).collect(),
            platforms: vec![platform; s],
            headway,
            demand,
            min_rates: vec![Q::zero(); s],
            link_length: None,
        }
    }

    pub fn num_stations(&self) -> usize {
        self.stations.len()
    }

    /// `A_s = Σ_s' A_ss'`.
    pub fn total_demand(&self, s: usize) -> Q {
        self.demand[s].iter().sum()
    }

    pub fn link_lengths(&self) -> Vec<Q> {
        let links = self.num_stations().saturating_sub(1);
        self.link_length.clone().unwrap_or_else(|| vec![Q::from_integer(1.into()); links])
    }

    /// Shortest platform among stations of each type, for a station-to-type map.
    pub fn shortest_platforms(&self, types: &[usize], num_types: usize) -> Vec<Option<u32>> {
        let mut d = vec![None; num_types];
        for (s, &i) in types.iter().enumerate() {
            let p = self.platforms[s];
            d[i] = Some(d[i].map_or(p, |x: u32| x.min(p)));
        }
        d
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ModelError::SchemaVersion { found: self.schema_version, expected: SCHEMA_VERSION });
        }
        let s = self.stations.len();
        let bad = |m: String| Err(ModelError::InvalidLine(m));
        if s == 0 {
            return bad("line has no stations".into());
        }
        if self.platforms.len() != s || self.min_rates.len() != s || self.demand.len() != s {
            return bad(format!("platforms, M_min and A must all have {s} entries (one per station)"));
        }
        if self.platforms.contains(&0) {
            return bad("platform lengths must be at least 1".into());
        }
        if !self.headway.is_positive() {
            return bad("headway H must be positive".into());
        }
        for (o, row) in self.demand.iter().enumerate() {
            if row.len() != s {
                return bad(format!("A row {} has {} entries, expected {s}", o + 1, row.len()));
            }
            for (dst, a) in row.iter().enumerate() {
                if a.is_negative() {
                    return bad(format!("A[{}][{}] is negative", o + 1, dst + 1));
                }
                if dst <= o && !a.is_zero() {
                    return bad(format!("A[{}][{}] must be zero: destinations lie downstream", o + 1, dst + 1));
                }
            }
        }
        for (i, m) in self.min_rates.iter().enumerate() {
            if m.is_negative() {
                return bad(format!("M_min[{}] is negative", i + 1));
            }
            if m > &self.total_demand(i) {
                return bad(format!("M_min[{}] exceeds the station demand A_s", i + 1));
            }
        }
        if let Some(ll) = &self.link_length {
            if ll.len() != s - 1 {
                return bad(format!("link_length must have {} entries", s - 1));
            }
            if ll.iter().any(|x| !x.is_positive()) {
                return bad("link lengths must be positive".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    fn three_station() -> LineInstance {
        let z = Q::zero();
        LineInstance::new(
            9,
            qr(1, 10),
            vec![vec![z.clone(), q(10), q(100)], vec![z.clone(), z.clone(), q(5)], vec![z.clone(), z.clone(), z]],
        )
    }

    #[test]
    fn valid_line_passes() {
        let line = three_station();
        line.validate().unwrap();
        assert_eq!(line.total_demand(0), q(110));
        assert_eq!(line.link_lengths(), vec![q(1), q(1)]);
    }

    #[test]
    fn upstream_demand_is_rejected() {
        let mut line = three_station();
        line.demand[2][0] = q(1);
        assert!(matches!(line.validate(), Err(ModelError::InvalidLine(_))));
    }

    #[test]
    fn min_rate_above_demand_is_rejected() {
        let mut line = three_station();
        line.min_rates[1] = q(6);
        assert!(line.validate().is_err());
    }

    #[test]
    fn json_uses_symbol_names() {
        let line = three_station();
        let v = serde_json::to_value(&line).unwrap();
        for key in ["H", "A", "M_min", "platforms", "schema_version"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: LineInstance = serde_json::from_value(v).unwrap();
        assert_eq!(back, line);
    }
}
