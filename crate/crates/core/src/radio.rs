//! Link-level metrics: SINR under joint transmission, achievable rate, PRB
//! demand, user priority and backhaul traffic.
//!
//! All SBSs transmit on every PRB (full buffer), so the interference seen by
//! user `k` is the received power of every SBS outside its cluster.

use ndarray::{Array2, ArrayView1};

use crate::{dbm_to_watts, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    pub tx_power_w: f64,
    pub noise_w: f64,
    /// Bandwidth per PRB. 1 Hz makes every rate a spectral efficiency.
    pub bandwidth_hz: f64,
    /// Minimum traffic per user, same unit as the rates.
    pub r_min: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self {
            tx_power_w: 1.0,
            noise_w: dbm_to_watts(-95.0),
            bandwidth_hz: 1.0,
            r_min: 4.0,
        }
    }
}

impl RadioParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("tx_power_w", self.tx_power_w),
            ("noise_w", self.noise_w),
            ("bandwidth_hz", self.bandwidth_hz),
            ("r_min", self.r_min),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(
                    name,
                    format!("must be finite and positive, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

/// SINR from the desired (cluster) power and the user's total received power.
pub fn sinr_from_sums(desired: f64, total: f64, noise: f64) -> f64 {
    let interference = (total - desired).max(0.0);
    desired / (interference + noise)
}

/// Joint-transmission SINR of user `k` served by `cluster`.
///
/// Desired and total power are accumulated in column order, so a cluster
/// containing every SBS leaves exactly the noise in the denominator.
pub fn sinr(power: &Array2<f64>, k: usize, cluster: &[usize], rp: &RadioParams) -> Result<f64> {
    if cluster.is_empty() {
        return Err(Error::param("cluster", "must contain at least one SBS"));
    }
    let row = power.row(k);
    let mut member = vec![false; row.len()];
    for &m in cluster {
        if m >= row.len() {
            return Err(Error::param(
                "cluster",
                format!("SBS index {m} out of range"),
            ));
        }
        member[m] = true;
    }
    let (desired, total) = row
        .iter()
        .zip(&member)
        .fold((0.0, 0.0), |(d, t), (&p, &c)| {
            (if c { d + p } else { d }, t + p)
        });
    Ok(sinr_from_sums(desired, total, rp.noise_w))
}

/// `B · log2(1 + SINR)`.
pub fn achievable_rate(sinr: f64, bandwidth_hz: f64) -> f64 {
    bandwidth_hz * sinr.ln_1p() / std::f64::consts::LN_2
}

/// PRBs needed to reach `r_min`: `ceil(r_min / rate)`, at least one.
///
/// The result always satisfies `demand · rate ≥ r_min` in floating point.
pub fn prb_demand(r_min: f64, rate: f64) -> Result<u64> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::Unserveable { rate });
    }
    let mut gamma = ((r_min / rate).ceil() as u64).max(1);
    while (gamma as f64) * rate < r_min {
        gamma += 1;
    }
    Ok(gamma)
}

/// Index of the strongest SBS in a row; ties go to the lower index.
pub fn strongest(row: ArrayView1<'_, f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (m, &p) in row.iter().enumerate() {
        if best.is_none_or(|(_, b)| p > b) {
            best = Some((m, p));
        }
    }
    best.map(|(m, _)| m)
}

/// SINR of user `k` when served by its strongest SBS alone.
pub fn sinr_no_coop(power: &Array2<f64>, k: usize, rp: &RadioParams) -> Result<f64> {
    let best = strongest(power.row(k)).ok_or_else(|| Error::param("power", "no SBS columns"))?;
    sinr(power, k, &[best], rp)
}

/// Coordination priority `r_min / log2(1 + SINR⁰)`; worse channels rank higher.
pub fn priority(sinr0: f64, r_min: f64) -> f64 {
    if sinr0 <= 0.0 {
        return f64::INFINITY;
    }
    r_min * std::f64::consts::LN_2 / sinr0.ln_1p()
}

/// User indices in descending priority, ties broken toward the lower index.
pub fn priority_order(power: &Array2<f64>, rp: &RadioParams) -> Result<Vec<usize>> {
    let lambda = (0..power.nrows())
        .map(|k| sinr_no_coop(power, k, rp).map(|s| priority(s, rp.r_min)))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..power.nrows()).collect();
    order.sort_by(|&a, &b| lambda[b].total_cmp(&lambda[a]).then(a.cmp(&b)));
    Ok(order)
}

/// The cluster matrix `C` with the per-user PRB count and rate it implies.
///
/// Unserved users have an empty row, `gamma = 0` and `rate = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub membership: Array2<bool>,
    pub gamma: Vec<u64>,
    pub rate: Vec<f64>,
    pub qos_met: Vec<bool>,
}

impl ClusterAssignment {
    pub fn empty(users: usize, sbs: usize) -> Self {
        Self {
            membership: Array2::from_elem((users, sbs), false),
            gamma: vec![0; users],
            rate: vec![0.0; users],
            qos_met: vec![false; users],
        }
    }

    pub fn users(&self) -> usize {
        self.membership.nrows()
    }

    pub fn sbs(&self) -> usize {
        self.membership.ncols()
    }

    pub fn cluster(&self, k: usize) -> Vec<usize> {
        self.membership
            .row(k)
            .iter()
            .enumerate()
            .filter_map(|(m, &c)| c.then_some(m))
            .collect()
    }

    pub fn cluster_size(&self, k: usize) -> usize {
        self.membership.row(k).iter().filter(|&&c| c).count()
    }

    pub fn is_served(&self, k: usize) -> bool {
        self.membership.row(k).iter().any(|&c| c)
    }

    pub fn served_count(&self) -> usize {
        (0..self.users()).filter(|&k| self.is_served(k)).count()
    }

    /// `Σ_k c_km γ_k` for SBS `m`.
    pub fn prb_load(&self, m: usize) -> u64 {
        self.membership
            .column(m)
            .iter()
            .zip(&self.gamma)
            .filter(|(&c, _)| c)
            .map(|(_, &g)| g)
            .sum()
    }

    pub(crate) fn serve(
        &mut self,
        k: usize,
        cluster: &[usize],
        gamma: u64,
        rate: f64,
        qos_met: bool,
    ) {
        for &m in cluster {
            self.membership[[k, m]] = true;
        }
        self.gamma[k] = gamma;
        self.rate[k] = rate;
        self.qos_met[k] = qos_met;
    }
}

/// `Σ_k c_km γ_k R_k` for SBS `m`.
pub fn sbs_backhaul(m: usize, assignment: &ClusterAssignment, rates: &[f64]) -> f64 {
    assignment
        .membership
        .column(m)
        .iter()
        .zip(assignment.gamma.iter().zip(rates))
        .filter(|(&c, _)| c)
        .map(|(_, (&g, &r))| g as f64 * r)
        .sum()
}

/// Mean per-SBS backhaul over all `sbs` SBSs, idle ones included.
pub fn network_backhaul(assignment: &ClusterAssignment, rates: &[f64], sbs: usize) -> Result<f64> {
    if sbs == 0 {
        return Err(Error::param(
            "sbs",
            "network backhaul needs at least one SBS",
        ));
    }
    let total: f64 = (0..sbs).map(|m| sbs_backhaul(m, assignment, rates)).sum();
    Ok(total / sbs as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ndarray::array;

    fn rp(noise: f64) -> RadioParams {
        RadioParams {
            noise_w: noise,
            ..RadioParams::default()
        }
    }

    #[test]
    fn noise_only_sinr() {
        let power = array![[1e-4]];
        let s = sinr(&power, 0, &[0], &RadioParams::default()).unwrap();
        assert_relative_eq!(s, 1e-4 / 10f64.powf(-12.5), max_relative = 1e-12);
        assert_relative_eq!(s, 3.162e8, max_relative = 1e-3);
    }

    #[test]
    fn full_cluster_leaves_noise() {
        let power = array![[3.3e-9, 1.7e-11, 2.9e-10, 5.5e-13]];
        let noise = 1e-12;
        let s = sinr(&power, 0, &[0, 1, 2, 3], &rp(noise)).unwrap();
        assert_eq!(s, power.sum() / noise);
    }

    #[test]
    fn three_sbs_regression_vector() {
        let power = array![[4e-12, 2e-12, 1e-12]];
        let s = sinr(&power, 0, &[0], &rp(1e-12)).unwrap();
        assert_relative_eq!(s, 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            sinr_no_coop(&power, 0, &rp(1e-12)).unwrap(),
            1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn sinr_contract() {
        let power = array![[1.0, 2.0]];
        assert!(sinr(&power, 0, &[], &rp(1.0)).is_err());
        assert!(sinr(&power, 0, &[2], &rp(1.0)).is_err());
    }

    #[test]
    fn no_coop_single_sbs_and_permutation() {
        let power = array![[5e-9]];
        assert_eq!(
            sinr_no_coop(&power, 0, &rp(1e-12)).unwrap(),
            sinr(&power, 0, &[0], &rp(1e-12)).unwrap()
        );
        let a = array![[4e-12, 2e-12, 1e-12]];
        let b = array![[1e-12, 4e-12, 2e-12]];
        assert_relative_eq!(
            sinr_no_coop(&a, 0, &rp(1e-12)).unwrap(),
            sinr_no_coop(&b, 0, &rp(1e-12)).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn strongest_breaks_ties_low() {
        let row = array![1.0, 3.0, 3.0, 2.0];
        assert_eq!(strongest(row.view()), Some(1));
        assert_eq!(strongest(ndarray::Array1::<f64>::zeros(0).view()), None);
    }

    #[test]
    fn rates() {
        assert_eq!(achievable_rate(0.0, 1.0), 0.0);
        assert_relative_eq!(achievable_rate(1.0, 1.0), 1.0);
        assert_relative_eq!(achievable_rate(3.0, 1.0), 2.0);
        assert_relative_eq!(achievable_rate(3.0, 180e3), 360e3);
    }

    #[test]
    fn demand() {
        assert_eq!(prb_demand(4.0, 4.0).unwrap(), 1);
        assert_eq!(prb_demand(4.0, 1.3).unwrap(), 4);
        assert_eq!(prb_demand(4.0, 100.0).unwrap(), 1);
        assert!(matches!(
            prb_demand(4.0, 0.0),
            Err(Error::Unserveable { .. })
        ));
        assert!(prb_demand(4.0, -1.0).is_err());
        assert!(prb_demand(4.0, f64::NAN).is_err());
    }

    #[test]
    fn priorities() {
        assert_relative_eq!(priority(1.0, 4.0), 4.0);
        assert_relative_eq!(priority(15.0, 4.0), 1.0);
        assert!(priority(0.5, 4.0) > priority(0.6, 4.0));
        assert_eq!(priority(0.0, 4.0), f64::INFINITY);
    }

    #[test]
    fn priority_order_ties_low_index() {
        // users 0 and 2 identical, user 1 has the worst channel
        let power = array![[4.0, 1.0], [1.0, 1.0], [4.0, 1.0]];
        let order = priority_order(&power, &rp(1.0)).unwrap();
        assert_eq!(order, vec![1, 0, 2]);
    }

    fn two_user_assignment() -> (ClusterAssignment, Vec<f64>) {
        let mut a = ClusterAssignment::empty(3, 2);
        a.serve(0, &[0], 2, 3.0, true);
        a.serve(1, &[0], 1, 5.0, true);
        let rates = a.rate.clone();
        (a, rates)
    }

    #[test]
    fn backhaul_examples() {
        let (a, rates) = two_user_assignment();
        assert_eq!(sbs_backhaul(0, &a, &rates), 11.0);
        assert_eq!(sbs_backhaul(1, &a, &rates), 0.0);
        assert_eq!(network_backhaul(&a, &rates, 2).unwrap(), 5.5);
        assert!(network_backhaul(&a, &rates, 0).is_err());
        let idle = ClusterAssignment::empty(3, 2);
        assert_eq!(network_backhaul(&idle, &idle.rate, 2).unwrap(), 0.0);
        assert_eq!(a.prb_load(0), 3);
        assert_eq!(a.served_count(), 2);
        assert_eq!(a.cluster(1), vec![0]);
    }

    #[test]
    fn backhaul_matches_explicit_loop() {
        let mut a = ClusterAssignment::empty(3, 3);
        a.serve(0, &[0, 2], 3, 1.5, true);
        a.serve(1, &[1], 1, 4.2, true);
        a.serve(2, &[0, 1, 2], 2, 2.25, true);
        let rates = a.rate.clone();
        for m in 0..3 {
            let mut expect = 0.0;
            for (k, r) in rates.iter().enumerate() {
                if a.membership[[k, m]] {
                    expect += a.gamma[k] as f64 * r;
                }
            }
            assert_relative_eq!(sbs_backhaul(m, &a, &rates), expect);
        }
        // exchange of summation order: (1/M) Σ_k N_k^B γ_k R_k
        let by_user: f64 = (0..3)
            .map(|k| a.cluster_size(k) as f64 * a.gamma[k] as f64 * rates[k])
            .sum::<f64>()
            / 3.0;
        assert_relative_eq!(
            network_backhaul(&a, &rates, 3).unwrap(),
            by_user,
            max_relative = 1e-12
        );
    }
}
