//! Distance-resource-limited clustering (DRC).
//!
//! Users are served in descending priority `Λ_k = R_min / log2(1 + SINR⁰_k)`,
//! where `SINR⁰_k` is the SINR from the strongest SBS alone, so users with the
//! worst channels get first pick of the PRBs. For each user:
//!
//! 1. The anchor is the strongest SBS that still has a free PRB.
//! 2. Candidates are the other SBSs with a free PRB whose distance to the user
//!    differs from the anchor's by at most half the ToA budget. Any two
//!    candidates then differ by at most the full budget.
//! 3. Starting from `{anchor}`, candidates are tried in descending received
//!    power. A candidate joins only if it has at least `γ_k` free PRBs, with
//!    `γ_k` recomputed for the enlarged cluster; otherwise it is skipped. The
//!    loop stops at the first cluster in which every member can host `γ_k`
//!    PRBs (which implies `γ_k R_k ≥ R_min`), and `γ_k` PRBs are reserved at
//!    each member.
//! 4. If the candidates run out first, the grown cluster keeps whatever it can
//!    get: `min(γ_k, min free)` PRBs at each member, flagged as a QoS miss.
//!    If no SBS has a free PRB the user is left unserved.
//!
//! Details the loop pins down:
//!
//! - Each candidate is visited once, strongest first; a rejected candidate is
//!   never retried.
//! - QoS is `γ_k R_k ≥ R_min`. With `γ_k` a ceiling it always holds, so growth
//!   is driven by PRB feasibility.
//! - A saturated strongest SBS cannot anchor; the next strongest with a free
//!   PRB does.
//! - When no cluster fits, step 4 applies rather than dropping the user.
//!
//! Cost per user is one pass over the row, a sort of the candidates, and a
//! cluster-sized sum per candidate, so `O(M²)` at worst and `O(K M²)` overall.

use ndarray::ArrayView1;

use super::{rate_and_demand, PrbLedger, SchemeConfig};
use crate::radio::{priority_order, ClusterAssignment, RadioParams};
use crate::{Result, Scenario};

pub fn drc_assign(
    scenario: &Scenario,
    cfg: &SchemeConfig,
    rp: &RadioParams,
) -> Result<(ClusterAssignment, PrbLedger)> {
    cfg.validate()?;
    rp.validate()?;
    let sbs = scenario.num_sbs();
    let mut out = ClusterAssignment::empty(scenario.num_users(), sbs);
    let mut ledger = PrbLedger::new(sbs, cfg.prb_budget);
    if sbs == 0 {
        return Ok((out, ledger));
    }
    let half_gate = cfg.toa_distance_budget_m / 2.0;
    let mut candidates = Vec::with_capacity(sbs);

    for k in priority_order(&scenario.power, rp)? {
        let power = scenario.power.row(k);
        let dist = scenario.distance.row(k);
        let total = row_total(power);
        let Some(anchor) = strongest_with_free_prb(power, &ledger) else {
            continue;
        };

        candidates.clear();
        candidates.extend((0..sbs).filter(|&m| {
            m != anchor && ledger.remaining(m) >= 1 && (dist[m] - dist[anchor]).abs() <= half_gate
        }));
        candidates.sort_by(|&a, &b| power[b].total_cmp(&power[a]).then(a.cmp(&b)));

        let mut members = vec![anchor];
        let mut min_free = ledger.remaining(anchor);
        let (mut rate, mut gamma) = rate_and_demand(cluster_power(power, &members), total, rp);
        let mut fits = reservation_fits(gamma, rate, min_free, rp);

        for &c in &candidates {
            if fits {
                break;
            }
            let mut grown = members.clone();
            let pos = grown.binary_search(&c).unwrap_or_else(|p| p);
            grown.insert(pos, c);
            let (r, g) = rate_and_demand(cluster_power(power, &grown), total, rp);
            let free = ledger.remaining(c);
            if !g.is_some_and(|g| u64::from(free) >= g) {
                continue;
            }
            members = grown;
            rate = r;
            gamma = g;
            min_free = min_free.min(free);
            fits = reservation_fits(gamma, rate, min_free, rp);
        }

        let Some(gamma) = gamma else {
            continue;
        };
        if fits {
            ledger.reserve(&members, gamma);
            out.serve(k, &members, gamma, rate, true);
        } else {
            // every member has at least one free PRB, so this is >= 1
            let partial = gamma.min(u64::from(min_free));
            ledger.reserve(&members, partial);
            out.serve(k, &members, partial, rate, false);
        }
    }
    Ok((out, ledger))
}

fn reservation_fits(gamma: Option<u64>, rate: f64, min_free: u32, rp: &RadioParams) -> bool {
    gamma.is_some_and(|g| g <= u64::from(min_free) && g as f64 * rate >= rp.r_min)
}

fn strongest_with_free_prb(power: ArrayView1<'_, f64>, ledger: &PrbLedger) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (m, &p) in power.iter().enumerate() {
        if ledger.remaining(m) >= 1 && best.is_none_or(|b| p > power[b]) {
            best = Some(m);
        }
    }
    best
}

/// Sequential left-to-right sum; matches the summation order used when
/// SINR is recomputed from a cluster row.
pub(crate) fn row_total(power: ArrayView1<'_, f64>) -> f64 {
    power.iter().fold(0.0, |acc, &p| acc + p)
}

/// Sum over `members`, which must be sorted ascending.
pub(crate) fn cluster_power(power: ArrayView1<'_, f64>, members: &[usize]) -> f64 {
    members.iter().fold(0.0, |acc, &m| acc + power[m])
}
