use num::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{FlowError, LoadProfile};
use crate::model::{LineInstance, ProtocolSpec};
use crate::rational::{serde_q, serde_q_vec, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityReport {
    /// Maximum-load link, 0-based (the link departing station `mlp + 1`).
    pub mlp: usize,
    /// `load / C_n` per section on the MLP link.
    #[serde(with = "serde_q_vec")]
    pub occupancy: Vec<Q>,
    /// Passengers per hour through the MLP with every section full.
    #[serde(with = "serde_q")]
    pub line_capacity: Q,
    /// Passengers per train carried at the MLP, capped by section capacity.
    #[serde(with = "serde_q")]
    pub carried: Q,
    /// Carried load over what a reference ordinary train holds.
    #[serde(with = "serde_q")]
    pub gain: Q,
    /// Units in the reference ordinary train.
    pub reference_units: u32,
    /// Whether every section is at or above capacity on the MLP link.
    pub full_at_mlp: bool,
}

/// Units in the longest ordinary train that fits the shortest platform.
///
/// Platform lengths are taken over the station types present on the line; an
/// unclassified spec uses every type.
pub fn reference_units(spec: &ProtocolSpec) -> u32 {
    let types = spec.delta.type_indices().filter(|t| !t.is_empty());
    let d = match types {
        Some(t) => t.iter().map(|&i| spec.stations.d[i]).min(),
        None => spec.stations.d.iter().copied().min(),
    }
    .unwrap_or(0);
    let l = spec.trains[0].unit_length.first().cloned().unwrap_or_else(|| Q::from_integer(1.into()));
    if !l.is_positive() {
        return 0;
    }
    (Q::from_integer(d.into()) / l).floor().to_integer().to_u32().unwrap_or(0)
}

/// Maximum-load point, occupancy and gain over a reference ordinary train.
///
/// `reference` overrides the reference train length in units.
pub fn capacity_report(
    profile: &LoadProfile,
    spec: &ProtocolSpec,
    line: &LineInstance,
    reference: Option<u32>,
) -> Result<CapacityReport, FlowError> {
    if profile.num_links() == 0 {
        return Err(FlowError::InvalidInput("the line has no links".into()));
    }
    if !line.headway.is_positive() {
        return Err(FlowError::InvalidInput("headway must be positive".into()));
    }
    let mut mlp = 0;
    let mut best = profile.link_total(0);
    for s in 1..profile.num_links() {
        let t = profile.link_total(s);
        if t > best {
            best = t;
            mlp = s;
        }
    }
    let caps = &profile.capacities;
    let occupancy: Vec<Q> =
        profile.load.iter().zip(caps).map(|(row, c)| if c.is_zero() { Q::zero() } else { &row[mlp] / c }).collect();
    let carried: Q = profile.load.iter().zip(caps).map(|(row, c)| row[mlp].clone().min(c.clone())).sum();
    let full_at_mlp = profile.load.iter().zip(caps).all(|(row, c)| &row[mlp] >= c);
    let total_cap: Q = caps.iter().sum();
    let reference_units = reference.unwrap_or_else(|| reference_units(spec));
    let train = &spec.trains[0];
    let mean_unit: Q = if train.units == 0 {
        Q::zero()
    } else {
        train.unit_capacity.iter().sum::<Q>() / Q::from_integer((train.units as i64).into())
    };
    let ordinary = Q::from_integer(reference_units.into()) * mean_unit;
    let gain = if ordinary.is_zero() { Q::zero() } else { &carried / ordinary };
    Ok(CapacityReport {
        mlp,
        occupancy,
        line_capacity: total_cap / &line.headway,
        carried,
        gain,
        reference_units,
        full_at_mlp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{assign, build_assignment, simulate_loads, ChoiceRule};
    use crate::model::{fr_h, ftr};
    use crate::rational::{q, qr};

    fn caps(spec: &ProtocolSpec) -> Vec<Q> {
        (0..spec.num_sections(0)).map(|n| spec.section_capacity(0, n)).collect()
    }

    fn entries(line: &LineInstance) -> Vec<Q> {
        (0..line.num_stations()).map(|s| line.total_demand(s)).collect()
    }

    #[test]
    fn fr_h_gain_is_four_thirds() {
        let spec = fr_h().classify(&["R", "F", "R", "F"]).unwrap();
        let mut a = vec![vec![Q::zero(); 4]; 4];
        a[0][2] = q(90);
        a[1][3] = q(30);
        let line = LineInstance::new(9, qr(1, 10), a);
        let e = entries(&line);
        let asg = assign(&spec, &line, &e, ChoiceRule::BalancedFill).unwrap();
        let p = simulate_loads(&asg, &e, &line, &caps(&spec)).unwrap();
        let r = capacity_report(&p, &spec, &line, None).unwrap();
        assert_eq!((r.mlp, r.reference_units), (1, 9));
        assert_eq!(r.gain, qr(4, 3));
        assert!(r.full_at_mlp);
        assert_eq!(r.line_capacity, q(120));
    }

    #[test]
    fn ftr_gain_is_two() {
        let spec = ftr().classify(&["R", "F", "R", "F"]).unwrap();
        let mut a = vec![vec![Q::zero(); 4]; 4];
        a[0][2] = q(4);
        a[1][3] = q(4);
        let line = LineInstance::new(4, q(1), a);
        let e = entries(&line);
        let asg = assign(&spec, &line, &e, ChoiceRule::BalancedFill).unwrap();
        let p = simulate_loads(&asg, &e, &line, &caps(&spec)).unwrap();
        let r = capacity_report(&p, &spec, &line, None).unwrap();
        assert_eq!(r.gain, q(2));
        assert_eq!(r.occupancy, vec![q(1); 4]);
    }

    #[test]
    fn mlp_ties_take_first_link() {
        let spec = crate::model::trivial(2, 2).unwrap().classify(&["A", "A", "A"]).unwrap();
        let mut a = vec![vec![Q::zero(); 3]; 3];
        a[0][2] = q(1);
        let line = LineInstance::new(2, q(1), a);
        let asg = build_assignment(&spec, &line).unwrap();
        let p = simulate_loads(&asg, &entries(&line), &line, &caps(&spec)).unwrap();
        let r = capacity_report(&p, &spec, &line, None).unwrap();
        assert_eq!(r.mlp, 0);
        assert!(!r.full_at_mlp);
        assert_eq!(r.gain, qr(1, 2));
    }
}
