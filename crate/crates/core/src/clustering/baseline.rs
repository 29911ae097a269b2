//! Fixed-rule baselines: power threshold (BPC) and nearest SBSs (BDC).
//!
//! Membership is decided per user without looking at the ledger. With
//! budget enforcement on, users are visited in descending priority, members
//! without a free PRB are dropped, and the reservation is clipped to the
//! smallest free count in the cluster (a shortfall clears `qos_met`).
//! Without enforcement every user gets its full `γ_k` and the overflow only
//! shows up in the constraint report.

use super::drc::{cluster_power, row_total};
use super::{rate_and_demand, PrbLedger, SchemeConfig};
use crate::radio::{priority_order, strongest, ClusterAssignment, RadioParams};
use crate::{Result, Scenario};

pub fn bpc_assign(
    scenario: &Scenario,
    cfg: &SchemeConfig,
    rp: &RadioParams,
) -> Result<(ClusterAssignment, PrbLedger)> {
    serve_fixed(scenario, cfg, rp, |k| {
        let row = scenario.power.row(k);
        let above: Vec<usize> = row
            .iter()
            .enumerate()
            .filter_map(|(m, &p)| (p > cfg.bpc_threshold_w).then_some(m))
            .collect();
        if above.is_empty() {
            strongest(row).into_iter().collect()
        } else {
            above
        }
    })
}

pub fn bdc_assign(
    scenario: &Scenario,
    cfg: &SchemeConfig,
    rp: &RadioParams,
) -> Result<(ClusterAssignment, PrbLedger)> {
    let size = cfg.bdc_cluster_size.min(scenario.num_sbs());
    serve_fixed(scenario, cfg, rp, |k| {
        let row = scenario.distance.row(k);
        let mut idx: Vec<usize> = (0..row.len()).collect();
        idx.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
        idx.truncate(size);
        idx.sort_unstable();
        idx
    })
}

/// `cluster_of(k)` must return SBS indices in ascending order.
fn serve_fixed(
    scenario: &Scenario,
    cfg: &SchemeConfig,
    rp: &RadioParams,
    cluster_of: impl Fn(usize) -> Vec<usize>,
) -> Result<(ClusterAssignment, PrbLedger)> {
    cfg.validate()?;
    rp.validate()?;
    let sbs = scenario.num_sbs();
    let mut out = ClusterAssignment::empty(scenario.num_users(), sbs);
    let mut ledger = PrbLedger::new(sbs, cfg.prb_budget);
    if sbs == 0 {
        return Ok((out, ledger));
    }
    for k in priority_order(&scenario.power, rp)? {
        let mut members = cluster_of(k);
        if cfg.enforce_prb_budget_for_baselines {
            members.retain(|&m| ledger.remaining(m) >= 1);
        }
        if members.is_empty() {
            continue;
        }
        let power = scenario.power.row(k);
        let (rate, gamma) = rate_and_demand(cluster_power(power, &members), row_total(power), rp);
        let Some(gamma) = gamma else {
            continue;
        };
        if cfg.enforce_prb_budget_for_baselines {
            let granted = gamma.min(u64::from(ledger.min_remaining(&members)));
            ledger.reserve(&members, granted);
            out.serve(k, &members, granted, rate, granted == gamma);
        } else {
            ledger.reserve_saturating(&members, gamma);
            out.serve(k, &members, gamma, rate, true);
        }
    }
    Ok((out, ledger))
}
