//! Cooperating-set selection.
//!
//! Every scheme maps a [`Scenario`] to a [`ClusterAssignment`] and the
//! [`PrbLedger`] left behind. Users are handled one at a time in descending
//! priority, so the ledger state a user sees depends on who came before.

mod baseline;
mod constraints;
pub mod drc;

use std::fmt;
use std::str::FromStr;

pub use baseline::{bdc_assign, bpc_assign};
pub use constraints::{check_constraints, ConstraintReport};
pub use drc::drc_assign;

use crate::radio::{ClusterAssignment, RadioParams};
use crate::{dbm_to_watts, Error, Result, Scenario, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Distance-resource-limited clustering.
    Drc,
    /// Power-threshold clustering.
    Bpc,
    /// Nearest-SBS clustering.
    Bdc,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Drc, Scheme::Bpc, Scheme::Bdc];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Drc => "DRC",
            Scheme::Bpc => "BPC",
            Scheme::Bdc => "BDC",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "DRC" => Ok(Scheme::Drc),
            "BPC" => Ok(Scheme::Bpc),
            "BDC" => Ok(Scheme::Bdc),
            _ => Err(Error::param("scheme", format!("unknown scheme `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    /// PRBs per SBS (Ω).
    pub prb_budget: u32,
    /// BPC joins every SBS received above this power.
    pub bpc_threshold_w: f64,
    /// BDC cluster size (number of nearest SBSs).
    pub bdc_cluster_size: usize,
    /// Largest allowed spread of user-SBS distances inside a cluster, `c · t_cp`.
    pub toa_distance_budget_m: f64,
    pub enforce_prb_budget_for_baselines: bool,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            prb_budget: 25,
            bpc_threshold_w: dbm_to_watts(-70.0),
            bdc_cluster_size: 3,
            toa_distance_budget_m: toa_budget_from_cp(500e-9),
            enforce_prb_budget_for_baselines: true,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prb_budget == 0 {
            return Err(Error::param("prb_budget", "must be at least 1"));
        }
        if self.bdc_cluster_size == 0 {
            return Err(Error::param("bdc_cluster_size", "must be at least 1"));
        }
        if self.toa_distance_budget_m.is_nan() || self.toa_distance_budget_m <= 0.0 {
            return Err(Error::param(
                "toa_distance_budget_m",
                format!("must be positive, got {}", self.toa_distance_budget_m),
            ));
        }
        if self.bpc_threshold_w.is_nan() || self.bpc_threshold_w < 0.0 {
            return Err(Error::param(
                "bpc_threshold_w",
                format!("must be non-negative, got {}", self.bpc_threshold_w),
            ));
        }
        Ok(())
    }
}

/// Distance-difference budget equivalent to a cyclic prefix of `t_cp` seconds.
pub fn toa_budget_from_cp(t_cp: f64) -> f64 {
    SPEED_OF_LIGHT * t_cp
}

/// Free PRBs per SBS. A reservation takes the same number of PRBs at every
/// cluster member, or nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrbLedger {
    remaining: Vec<u32>,
    capacity: u32,
    /// PRBs requested beyond the budget by unenforced reservations.
    overflow: u64,
}

impl PrbLedger {
    pub fn new(sbs: usize, capacity: u32) -> Self {
        Self {
            remaining: vec![capacity; sbs],
            capacity,
            overflow: 0,
        }
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn remaining(&self, m: usize) -> u32 {
        self.remaining[m]
    }

    pub fn remaining_all(&self) -> &[u32] {
        &self.remaining
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn min_remaining(&self, members: &[usize]) -> u32 {
        members
            .iter()
            .map(|&m| self.remaining[m])
            .min()
            .unwrap_or(0)
    }

    pub fn can_reserve(&self, members: &[usize], prbs: u64) -> bool {
        members
            .iter()
            .all(|&m| u64::from(self.remaining[m]) >= prbs)
    }

    /// Takes `prbs` at every member; refuses (and changes nothing) if any
    /// member is short.
    pub fn reserve(&mut self, members: &[usize], prbs: u64) -> bool {
        if !self.can_reserve(members, prbs) {
            return false;
        }
        for &m in members {
            // prbs <= remaining[m] <= u32::MAX
            self.remaining[m] -= prbs as u32;
        }
        true
    }

    /// Takes what is available and records the shortfall as overflow.
    pub fn reserve_saturating(&mut self, members: &[usize], prbs: u64) {
        for &m in members {
            let have = u64::from(self.remaining[m]);
            self.overflow += prbs.saturating_sub(have);
            self.remaining[m] = have.saturating_sub(prbs) as u32;
        }
    }

    /// Mean fraction of used PRBs over all SBSs.
    pub fn utilization(&self) -> f64 {
        if self.remaining.is_empty() {
            return 0.0;
        }
        let cap = f64::from(self.capacity);
        self.remaining
            .iter()
            .map(|&r| (cap - f64::from(r)) / cap)
            .sum::<f64>()
            / self.remaining.len() as f64
    }
}

pub fn assign(
    scheme: Scheme,
    scenario: &Scenario,
    cfg: &SchemeConfig,
    rp: &RadioParams,
) -> Result<(ClusterAssignment, PrbLedger)> {
    match scheme {
        Scheme::Drc => drc_assign(scenario, cfg, rp),
        Scheme::Bpc => bpc_assign(scenario, cfg, rp),
        Scheme::Bdc => bdc_assign(scenario, cfg, rp),
    }
}

/// Rate and PRB demand of a user whose cluster collects `desired` out of
/// `total` received power.
pub(crate) fn rate_and_demand(desired: f64, total: f64, rp: &RadioParams) -> (f64, Option<u64>) {
    let sinr = crate::radio::sinr_from_sums(desired, total, rp.noise_w);
    let rate = crate::radio::achievable_rate(sinr, rp.bandwidth_hz);
    (rate, crate::radio::prb_demand(rp.r_min, rate).ok())
}
