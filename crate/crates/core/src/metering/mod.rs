//! Entry-rate metering: the largest passenger throughput that overcrowds no
//! section, over fixed or enumerated station classifications and sizings.

mod density;
mod inner;
mod outer;
mod problem;
mod simplex;

pub use density::{even_density_check, DensityReport};
pub use inner::{constraint_rows, solve_inner_lp, solve_inner_with};
pub use outer::{candidate_count, compositions, solve_outer, DEFAULT_CAP};
pub use problem::{Binding, MeteringProblem, MeteringSolution, Objective};
pub use simplex::{maximize, LpSolution};

use crate::flow::FlowError;
use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeteringError {
    #[error("minimum entry rates alone overcrowd section {section} on the link after station {station}")]
    InfeasibleMinRates { section: usize, station: usize },
    #[error("search space has {count} candidates; fix the classification or the sizing")]
    SearchSpaceTooLarge { count: u128 },
    #[error("no candidate classification and sizing is feasible")]
    NoFeasibleCandidate,
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
