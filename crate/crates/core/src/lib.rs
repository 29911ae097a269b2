//! Joint-transmission CoMP clustering for small-cell networks with an
//! anisotropic (fractal) path-loss model.
//!
//! A drop places SBSs and users as two independent Poisson point processes,
//! draws a per-link path-loss exponent from the fractal coverage-boundary
//! model plus Rayleigh fading, and then lets a clustering scheme pick the
//! cooperating SBS set of every user under a per-SBS PRB budget and a
//! time-of-arrival (distance difference) budget. Three schemes are provided:
//!
//! - [`Scheme::Drc`]: distance-resource-limited clustering, the greedy
//!   priority-ordered heuristic in [`clustering::drc`].
//! - [`Scheme::Bpc`]: every SBS whose received power exceeds a threshold.
//! - [`Scheme::Bdc`]: the `n` nearest SBSs.
//!
//! [`montecarlo`] runs reproducible, parallel drops and aggregates rate and
//! backhaul metrics; [`oracle`] holds independent brute-force checkers.

pub mod channel;
pub mod clustering;
mod error;
pub mod geometry;
pub mod montecarlo;
pub mod oracle;
pub mod radio;
pub mod scenario;

pub use channel::{ChannelRealization, FractalParams};
pub use clustering::{
    assign, check_constraints, ConstraintReport, PrbLedger, Scheme, SchemeConfig,
};
pub use error::{Error, Result};
pub use geometry::{Metric, Point, PointSet, Region};
pub use montecarlo::{
    AggregateResult, DropResult, SchemeAggregate, SchemeMetrics, SimParams, Summary, SweepAxis,
    SweepPoint,
};
pub use radio::{ClusterAssignment, RadioParams};
pub use scenario::Scenario;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Converts a power level in dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts a power level in watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}
