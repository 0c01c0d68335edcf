//! Domain types: station and train catalogs, the seven decision tables, and
//! line instances.

mod constructors;
mod line;
mod parts;
mod spec;
mod tables;

pub use constructors::{fr_h, fr_i, fr_i_from_table_order, ftr, trivial};
pub use line::LineInstance;
pub use parts::{derive_parts, TrainPart};
pub(crate) use spec::assemble;
pub use spec::{build_protocol, EolRule, ProtocolSpec, ProtocolTables, StationTypeCatalog, TrainTypeSpec};
pub use tables::{
    AlignmentTable, DisembarkationTable, PresentationTable, SectionDefinition, StationClassification, StopTable,
    TrainSequence,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{table} row {row} sums to {sum}, expected exactly 1")]
    RowSumViolation { table: &'static str, row: usize, sum: u32 },
    #[error("section {section} of train type {train} is not made of consecutive units")]
    NonConsecutiveSection { train: usize, section: usize },
    #[error("table {table} has a non-binary entry at ({at})")]
    NonBinary { table: &'static str, at: String },
    #[error("unit {unit} of train type {train} belongs to {sections} sections, expected 1")]
    UnitPartition { train: usize, unit: usize, sections: usize },
    #[error("section {section} of train type {train} has no units")]
    EmptySection { train: usize, section: usize },
    #[error("section {section} of train type {train} holds a never-aligned unit but aligns at {station_type}")]
    DoorlessSectionAligned { train: usize, section: usize, station_type: String },
    #[error("expected 4 section sizes, got {0}")]
    BadSectionCount(usize),
    #[error("unknown station-type label `{0}`")]
    UnknownLabel(String),
    #[error("invalid station catalog: {0}")]
    InvalidCatalog(String),
    #[error("invalid line instance: {0}")]
    InvalidLine(String),
    #[error("unsupported schema version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },
}
