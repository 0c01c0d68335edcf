//! Gate signs, chart drawings and file formats.

mod chart;
mod gates;
pub mod io;

pub use chart::{render_chart, ChartRendering, Overlay};
pub use gates::{
    check_gate_consistency, derive_gate_signs, Gate, GateSignTable, GateViolation, Sign, StationSigns, TrainSigns,
};
