//! Independent reference computations used to check the main code paths.
//!
//! Nothing here calls into [`crate::radio`] or [`crate::clustering`]: the
//! exhaustive search recomputes SINR, rate, PRB demand and every constraint
//! on its own so that agreement between the two is meaningful.

mod exhaustive;
mod stats;

pub use exhaustive::{
    evaluate_assignment, evaluate_candidate, exhaustive_min_backhaul, CandidateVerdict,
    OracleOutcome, TinyInstance, MAX_TINY_SBS, MAX_TINY_USERS,
};
pub use stats::{binned_density_error, integrate, ks_statistic, BinnedComparison};
