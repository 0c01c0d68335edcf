//! Steady-state passenger assignment, section loads and capacity metrics.

mod access;
mod assignment;
mod capacity;
mod choice;
mod headway;
mod loads;
mod sizing;

pub use access::{access_penalty, access_penalty_ftr, AccessPenalty};
pub use assignment::{build_assignment, station_types, AssignmentTensor};
pub use capacity::{capacity_report, reference_units, CapacityReport};
pub use choice::{assign, assign_with_rule, water_fill, ChoiceRule};
pub use headway::{capacity_reduction, headway_correction};
pub use loads::{boardings_and_alightings, simulate_loads, LoadProfile};
pub use sizing::size_sections_proportional;

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error(
        "{sections} sections present the trip from station {origin} to station {destination}; expected exactly one"
    )]
    AmbiguousAssignment { origin: usize, destination: usize, sections: usize },
    #[error("no section presents the trip from station {origin} to station {destination}")]
    UnservedPair { origin: usize, destination: usize },
    #[error("the load model needs a single train type, found {0}")]
    MultipleTrainTypes(usize),
    #[error("station classification does not match the {0} stations of the line")]
    Unclassified(usize),
    #[error("cruise speed must be positive")]
    NonpositiveSpeed,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
