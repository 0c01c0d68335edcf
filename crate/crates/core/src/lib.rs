//! Operating protocols for extra-long urban trains.
//!
//! A protocol is a set of binary decision tables (station classification,
//! train sequence, sections, stops, alignment, disembarkation and presentation).
//! The crate builds and checks protocols, generates step-family bar charts,
//! counts transfers, computes section loads and capacity, and solves the
//! entry-metering program exactly in rational arithmetic.

pub mod feasibility;
pub mod flow;
pub mod metering;
pub mod model;
pub mod rational;
pub mod render;
pub mod routing;
pub mod sfamily;

/// Version written to and required from every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

pub use rational::Q;
