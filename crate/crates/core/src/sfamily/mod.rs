//! Single-train bar charts, the step family S(C, D) and multi-train charts.

mod chart;
mod convert;
mod formulas;
mod generate;
mod multi;
mod refine;

pub use chart::{Bar, BarChart, MultiTrainChart, TrainChart};
pub use convert::chart_to_protocol;
pub use formulas::{
    max_connected_classes, max_length_with_transfers, train_length_ratio, within_length_bound, worst_case_transfers,
};
pub use generate::{default_labels, generate_s, generate_s_labeled, SFamilySpec};
pub use multi::{build_ftr3, build_s52_2, compose_skip_stop, SkipStopPlan};
pub use refine::{greedy_presentation_refine, max_density, RefineOutcome};

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SFamilyError {
    #[error("steps of S({c}, D) are not whole units on {d}-unit platforms")]
    NonIntegralStep { c: u32, d: u32 },
    #[error("some station types cannot be connected")]
    Unreachable,
    #[error("station subsets do not cover the line: {0}")]
    SubsetCoverage(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
