//! Canonical tables for the F/R-H, F/R-I and F/T/R protocols.

use super::spec::{assemble, build_protocol, ProtocolSpec, ProtocolTables, StationTypeCatalog, TrainTypeSpec};
use super::tables::*;
use super::ModelError;
use crate::rational::q;

const F: usize = 0;
const R: usize = 1;

/// Section `n` aligns at station type `i` iff `align[n][i] == 1`.
fn single_train(stations: StationTypeCatalog, sizes: &[u32], align: Vec<Vec<u8>>) -> Result<ProtocolSpec, ModelError> {
    let units = sizes.iter().sum::<u32>() as usize;
    let c = stations.len();
    let train = TrainTypeSpec::uniform("XLT", units, sizes.len(), q(1));
    let tables = ProtocolTables {
        delta: StationClassification::default(),
        epsilon: TrainSequence(vec![vec![1]]),
        u: SectionDefinition(vec![SectionDefinition::from_sizes(sizes)]),
        s: StopTable(vec![vec![1; c]]),
        a: AlignmentTable(vec![align]),
        v: DisembarkationTable::default(),
        p: PresentationTable::default(),
    };
    let mut spec = assemble(stations, vec![train], tables);
    spec.static_presentation();
    spec.validate()?;
    Ok(spec)
}

fn fr_alignment() -> Vec<Vec<u8>> {
    // columns: F, R
    vec![vec![1, 0], vec![1, 1], vec![1, 1], vec![0, 1]]
}

/// Static-homogeneous F/R: 12 units in four equal sections on 9-unit platforms.
pub fn fr_h() -> ProtocolSpec {
    let stations = StationTypeCatalog::new([("F", 9), ("R", 9)]);
    single_train(stations, &[3, 3, 3, 3], fr_alignment())
        .expect("canonical F/R-H tables are valid")
        .with_eol(&["R"], &["F"])
}

/// Dynamic-inhomogeneous F/R with section sizes given front to rear.
///
/// Platforms are sized to the aligned blocks: `d_F = s1+s2+s3`, `d_R = s2+s3+s4`.
/// Section 2 presents only R at F-stations and section 3 only F at R-stations.
pub fn fr_i(section_sizes: &[u32]) -> Result<ProtocolSpec, ModelError> {
    let [s1, s2, s3, s4] = section_sizes else {
        return Err(ModelError::BadSectionCount(section_sizes.len()));
    };
    if let Some(n) = section_sizes.iter().position(|&x| x == 0) {
        return Err(ModelError::EmptySection { train: 1, section: n + 1 });
    }
    let stations = StationTypeCatalog::new([("F", s1 + s2 + s3), ("R", s2 + s3 + s4)]);
    let mut spec = single_train(stations, section_sizes, fr_alignment())?;
    let mut p = vec![vec![vec![0u8; 2]; 2]; 4];
    p[0][F][F] = 1;
    p[1][F][R] = 1;
    p[2][R][F] = 1;
    p[3][R][R] = 1;
    spec.p = PresentationTable(vec![p]);
    spec.validate()?;
    Ok(spec.with_eol(&["R"], &["F"]))
}

/// Reorders sizes listed by O-D type (FF, RR, FR, RF) into front-to-rear
/// section order (FF, FR, RF, RR) and builds the F/R-I spec.
pub fn fr_i_from_table_order(sizes_by_od: &[u32]) -> Result<ProtocolSpec, ModelError> {
    let [ff, rr, fr, rf] = sizes_by_od else {
        return Err(ModelError::BadSectionCount(sizes_by_od.len()));
    };
    fr_i(&[*ff, *fr, *rf, *rr])
}

/// Static F/T/R: 8 units in four sections of 2 on 4-unit platforms.
pub fn ftr() -> ProtocolSpec {
    let stations = StationTypeCatalog::new([("F", 4), ("T", 4), ("R", 4)]);
    // columns: F, T, R
    let align = vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]];
    single_train(stations, &[2, 2, 2, 2], align).expect("canonical F/T/R tables are valid").with_eol(&["R"], &["F"])
}

/// Single-class system: one station type, one section, everything enabled.
pub fn trivial(units: usize, platform: u32) -> Result<ProtocolSpec, ModelError> {
    let stations = StationTypeCatalog::new([("A", platform)]);
    let train = TrainTypeSpec::uniform("XLT", units, 1, q(1));
    build_protocol(
        stations,
        vec![train],
        ProtocolTables {
            delta: StationClassification::default(),
            epsilon: TrainSequence(vec![vec![1]]),
            u: SectionDefinition(vec![vec![vec![1]; units]]),
            s: StopTable(vec![vec![1]]),
            a: AlignmentTable(vec![vec![vec![1]]]),
            v: DisembarkationTable(vec![vec![vec![1]]]),
            p: PresentationTable(vec![vec![vec![vec![1]]]]),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fr_h_shape() {
        let spec = fr_h();
        assert_eq!(spec.trains[0].units, 12);
        assert_eq!(spec.section_sizes(0), vec![3, 3, 3, 3]);
        assert!(spec.p.at(0, 1, F, R));
        assert!(spec.p.at(0, 1, R, F));
        assert!(!spec.a.at(0, 0, R));
    }

    #[test]
    fn fr_i_presentation_is_partial() {
        let spec = fr_i(&[3, 3, 3, 3]).unwrap();
        assert_eq!(spec.stations.d, vec![9, 9]);
        assert!(spec.p.at(0, 1, F, R));
        assert!(!spec.p.at(0, 1, F, F));
        assert!(!spec.p.at(0, 1, R, F));
        assert!(spec.p.at(0, 2, R, F));
        assert!(!spec.p.at(0, 2, F, R));
    }

    #[test]
    fn fr_i_table_order_gives_eight_unit_platforms() {
        let spec = fr_i_from_table_order(&[4, 4, 1, 3]).unwrap();
        assert_eq!(spec.section_sizes(0), vec![4, 1, 3, 4]);
        assert_eq!(spec.stations.d, vec![8, 8]);
    }

    #[test]
    fn fr_i_rejects_wrong_count() {
        assert_eq!(fr_i(&[3, 3, 3]).unwrap_err(), ModelError::BadSectionCount(3));
        assert!(fr_i(&[3, 0, 3, 3]).is_err());
    }

    #[test]
    fn ftr_shape() {
        let spec = ftr();
        assert_eq!(spec.trains[0].units, 8);
        assert_eq!(spec.label_set(0, 1).into_iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn trivial_is_valid() {
        let spec = trivial(5, 5).unwrap();
        assert_eq!(spec.section_sizes(0), vec![5]);
    }
}
