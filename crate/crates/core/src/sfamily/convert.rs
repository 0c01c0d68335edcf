use super::{MultiTrainChart, SFamilyError};
use crate::model::{
    assemble, AlignmentTable, DisembarkationTable, PresentationTable, ProtocolSpec, ProtocolTables, SectionDefinition,
    StationClassification, StationTypeCatalog, StopTable, TrainSequence, TrainTypeSpec,
};
use crate::rational::q;

/// Expands charts into full tables with one unit per section, `v = a` and
/// `p_nij = a_ni·a_nj`. `station_labels` optionally classifies the line.
pub fn chart_to_protocol(
    multi: &MultiTrainChart,
    station_labels: Option<&[String]>,
) -> Result<ProtocolSpec, SFamilyError> {
    multi.validate()?;
    let c = multi.types.len();
    let stations = StationTypeCatalog { labels: multi.types.clone(), d: multi.platform_lengths() };
    let mut trains = Vec::new();
    let (mut u, mut s, mut a) = (Vec::new(), Vec::new(), Vec::new());
    for (k, tc) in multi.trains.iter().enumerate() {
        let chart = &tc.chart;
        let m = chart.m as usize;
        trains.push(TrainTypeSpec::uniform(tc.label.clone(), m, m, q(1)));
        u.push((0..m).map(|x| (0..m).map(|y| u8::from(x == y)).collect()).collect());
        let bar = |i: usize| multi.bar_of(k, i);
        s.push((0..c).map(|i| u8::from(bar(i).is_some_and(|b| !chart.is_skipped(b)))).collect());
        a.push(
            (0..chart.m)
                .map(|n| (0..c).map(|i| u8::from(bar(i).is_some_and(|b| chart.unit_aligned(n, b)))).collect())
                .collect(),
        );
    }
    let rotation: Vec<usize> =
        multi.rotation.iter().map(|r| multi.trains.iter().position(|t| &t.label == r).unwrap_or(0)).collect();
    let tables = ProtocolTables {
        delta: StationClassification::default(),
        epsilon: TrainSequence::rotation(&rotation, multi.trains.len()),
        u: SectionDefinition(u),
        s: StopTable(s),
        a: AlignmentTable(a),
        v: DisembarkationTable::default(),
        p: PresentationTable::default(),
    };
    let mut spec = assemble(stations, trains, tables);
    spec.static_presentation();
    spec.validate()?;
    let spec = match station_labels {
        Some(labels) => spec.classify(labels)?,
        None => spec,
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::{check, CheckOptions};
    use crate::model::derive_parts;
    use crate::sfamily::{generate_s, BarChart};

    #[test]
    fn fig4_protocol_has_six_parts() {
        let chart = BarChart::new(
            19,
            [("C", 8, 8), ("D", 10, 8), ("A", 21, 8), ("B", 19, 12)].map(|(l, b, d)| (l.to_string(), b, d)),
        );
        let spec = chart_to_protocol(&MultiTrainChart::single(chart), None).unwrap();
        assert_eq!(derive_parts(&spec, 0).len(), 6);
        assert!(check(&spec, &CheckOptions::default()).feasible);
    }

    #[test]
    fn skipped_bar_means_no_stop() {
        let chart = BarChart::new(6, [("A".to_string(), 0, 4), ("B".to_string(), 6, 4)]);
        let spec = chart_to_protocol(&MultiTrainChart::single(chart), None).unwrap();
        assert!(!spec.s.at(0, 0));
        assert!(spec.s.at(0, 1));
    }

    #[test]
    fn generated_chart_is_feasible() {
        let chart = generate_s(3, &q(2), 4).unwrap();
        let labels: Vec<String> = ["A", "C"].map(String::from).to_vec();
        let spec = chart_to_protocol(&MultiTrainChart::single(chart), Some(&labels)).unwrap();
        assert!(check(&spec, &CheckOptions::default()).feasible);
        assert_eq!(spec.delta.type_indices(), Some(vec![0, 2]));
    }
}
