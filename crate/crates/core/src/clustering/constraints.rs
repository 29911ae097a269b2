use crate::radio::{achievable_rate, sinr, ClusterAssignment, RadioParams};
use crate::Scenario;

use super::SchemeConfig;

/// Per-user and per-SBS verdicts for the constraints of the backhaul
/// minimization problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub served: Vec<bool>,
    /// `γ_k R_k ≥ R_min`, with `R_k` recomputed from the cluster row.
    pub qos: Vec<bool>,
    /// `Σ_k c_km γ_k ≤ Ω` per SBS.
    pub capacity: Vec<bool>,
    /// `Σ_k c_km γ_k ≥ 1` per SBS. Reported, but not part of [`is_feasible`]:
    /// an idle SBS carries no backhaul.
    ///
    /// [`is_feasible`]: ConstraintReport::is_feasible
    pub sbs_active: Vec<bool>,
    /// `γ_k ≥ 1`.
    pub min_prb: Vec<bool>,
    /// `Σ_m c_km ≥ 1`.
    pub coverage: Vec<bool>,
    /// `|r_km − r_kn| ≤ c·t_cp` for every pair of cluster members.
    pub toa: Vec<bool>,
}

fn count_false(v: &[bool]) -> usize {
    v.iter().filter(|&&ok| !ok).count()
}

fn count_false_where(v: &[bool], mask: &[bool]) -> usize {
    v.iter().zip(mask).filter(|(&ok, &m)| m && !ok).count()
}

impl ConstraintReport {
    pub fn eq11_violations(&self) -> usize {
        count_false(&self.qos)
    }

    pub fn eq11_violations_served(&self) -> usize {
        count_false_where(&self.qos, &self.served)
    }

    pub fn eq12_violations(&self) -> usize {
        count_false(&self.capacity)
    }

    pub fn idle_sbs(&self) -> usize {
        count_false(&self.sbs_active)
    }

    pub fn eq13_violations(&self) -> usize {
        count_false(&self.min_prb)
    }

    pub fn eq13_violations_served(&self) -> usize {
        count_false_where(&self.min_prb, &self.served)
    }

    pub fn eq14_violations(&self) -> usize {
        count_false(&self.coverage)
    }

    pub fn eq15_violations(&self) -> usize {
        count_false(&self.toa)
    }

    /// All per-user constraints and the capacity bound hold.
    pub fn is_feasible(&self) -> bool {
        self.eq11_violations() == 0
            && self.eq12_violations() == 0
            && self.eq13_violations() == 0
            && self.eq14_violations() == 0
            && self.eq15_violations() == 0
    }
}

pub fn check_constraints(
    assignment: &ClusterAssignment,
    scenario: &Scenario,
    rp: &RadioParams,
    cfg: &SchemeConfig,
) -> ConstraintReport {
    let users = assignment.users();
    let sbs = assignment.sbs();
    let mut report = ConstraintReport {
        served: vec![false; users],
        qos: vec![false; users],
        capacity: vec![true; sbs],
        sbs_active: vec![false; sbs],
        min_prb: vec![false; users],
        coverage: vec![false; users],
        toa: vec![true; users],
    };

    for k in 0..users {
        let cluster = assignment.cluster(k);
        let gamma = assignment.gamma[k];
        report.served[k] = !cluster.is_empty();
        report.coverage[k] = !cluster.is_empty();
        report.min_prb[k] = gamma >= 1;
        let rate = match sinr(&scenario.power, k, &cluster, rp) {
            Ok(s) => achievable_rate(s, rp.bandwidth_hz),
            Err(_) => 0.0,
        };
        report.qos[k] = gamma as f64 * rate >= rp.r_min;
        let d = scenario.distance.row(k);
        report.toa[k] = cluster.iter().enumerate().all(|(i, &m)| {
            cluster[i + 1..]
                .iter()
                .all(|&n| (d[m] - d[n]).abs() <= cfg.toa_distance_budget_m)
        });
    }
    for m in 0..sbs {
        let load = assignment.prb_load(m);
        report.capacity[m] = load <= u64::from(cfg.prb_budget);
        report.sbs_active[m] = load >= 1;
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn scenario() -> Scenario {
        Scenario::from_links(
            array![[50.0, 250.0, 120.0], [80.0, 90.0, 400.0]],
            array![[3.0, 3.0, 3.0], [3.0, 3.0, 3.0]],
            array![[1.0, 1.0, 1.0], [1.0, 1.0, 1.0]],
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn empty_assignment_violates_coverage_for_everyone() {
        let s = scenario();
        let a = ClusterAssignment::empty(2, 3);
        let r = check_constraints(&a, &s, &RadioParams::default(), &SchemeConfig::default());
        assert_eq!(r.eq14_violations(), 2);
        assert_eq!(r.eq12_violations(), 0);
        assert_eq!(r.idle_sbs(), 3);
        assert!(!r.is_feasible());
    }

    #[test]
    fn flags_toa_spread_over_budget() {
        let s = scenario();
        let mut a = ClusterAssignment::empty(2, 3);
        // members at 50 m and 250 m: 200 m spread > 150 m
        a.serve(0, &[0, 1], 1, 10.0, true);
        a.serve(1, &[0, 1], 1, 10.0, true);
        let r = check_constraints(&a, &s, &RadioParams::default(), &SchemeConfig::default());
        assert_eq!(r.toa, vec![false, true]);
        assert_eq!(r.eq15_violations(), 1);
    }

    #[test]
    fn capacity_and_qos() {
        let s = scenario();
        let rp = RadioParams::default();
        let cfg = SchemeConfig {
            prb_budget: 2,
            ..SchemeConfig::default()
        };
        let mut a = ClusterAssignment::empty(2, 3);
        a.serve(0, &[0], 2, 0.0, true);
        a.serve(1, &[0], 1, 0.0, true);
        let r = check_constraints(&a, &s, &rp, &cfg);
        assert_eq!(r.capacity, vec![false, true, true]);
        // both users see >= 0 dB SINR from 50/80 m at beta 3 vs noise; gamma*R >= 4?
        let rate0 = achievable_rate(sinr(&s.power, 0, &[0], &rp).unwrap(), 1.0);
        assert_eq!(r.qos[0], 2.0 * rate0 >= 4.0);
        a.gamma[1] = 0;
        let r = check_constraints(&a, &s, &rp, &cfg);
        assert_eq!(r.eq13_violations(), 1);
        assert!(!r.qos[1]);
    }
}
