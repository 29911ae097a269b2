use ndarray::Array2;
use rand::Rng;

use crate::channel::{realize_channel, FractalParams};
use crate::clustering::SchemeConfig;
use crate::radio::{ClusterAssignment, RadioParams};
use crate::{Error, Result, Scenario};

pub const MAX_TINY_USERS: usize = 4;
pub const MAX_TINY_SBS: usize = 6;

/// A scenario small enough that every `K x M` cluster matrix can be listed.
#[derive(Debug, Clone, PartialEq)]
pub struct TinyInstance {
    scenario: Scenario,
}

impl TinyInstance {
    pub fn new(scenario: Scenario) -> Result<Self> {
        let (users, sbs) = (scenario.num_users(), scenario.num_sbs());
        if users > MAX_TINY_USERS || sbs > MAX_TINY_SBS {
            return Err(Error::InstanceTooLarge {
                users,
                sbs,
                max_users: MAX_TINY_USERS,
                max_sbs: MAX_TINY_SBS,
            });
        }
        Ok(Self { scenario })
    }

    /// Users and SBSs uniform on a `side x side` plane square, with channel
    /// drawn from the fractal model.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        users: usize,
        sbs: usize,
        side: f64,
        fp: &FractalParams,
        tx_power: f64,
    ) -> Result<Self> {
        if users > MAX_TINY_USERS || sbs > MAX_TINY_SBS {
            return Err(Error::InstanceTooLarge {
                users,
                sbs,
                max_users: MAX_TINY_USERS,
                max_sbs: MAX_TINY_SBS,
            });
        }
        let point = |rng: &mut R| (rng.random_range(0.0..side), rng.random_range(0.0..side));
        let ue: Vec<(f64, f64)> = (0..users).map(|_| point(rng)).collect();
        let bs: Vec<(f64, f64)> = (0..sbs).map(|_| point(rng)).collect();
        let distance = Array2::from_shape_fn((users, sbs), |(k, m)| {
            (ue[k].0 - bs[m].0).hypot(ue[k].1 - bs[m].1)
        });
        let ch = realize_channel(&distance, fp, tx_power, rng)?;
        Self::new(Scenario::from_links(
            distance, ch.beta, ch.fading, tx_power,
        )?)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Optimal {
        assignment: ClusterAssignment,
        backhaul: f64,
    },
    Infeasible,
}

/// The oracle's own evaluation of one complete cluster matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateVerdict {
    pub feasible: bool,
    /// `ceil(R_min / R_k)`; 0 for an empty row.
    pub gamma: Vec<u64>,
    pub rate: Vec<f64>,
    pub backhaul: f64,
}

#[derive(Debug, Clone, Copy)]
struct Row {
    mask: u32,
    gamma: u64,
    rate: f64,
    /// All per-user constraints hold for this row on its own.
    user_ok: bool,
}

fn eval_row(s: &Scenario, k: usize, mask: u32, rp: &RadioParams, cfg: &SchemeConfig) -> Row {
    let sbs = s.num_sbs();
    let mut desired = 0.0;
    let mut total = 0.0;
    let mut r_lo = f64::INFINITY;
    let mut r_hi = f64::NEG_INFINITY;
    for m in 0..sbs {
        let p = s.power[[k, m]];
        total += p;
        if mask >> m & 1 == 1 {
            desired += p;
            r_lo = r_lo.min(s.distance[[k, m]]);
            r_hi = r_hi.max(s.distance[[k, m]]);
        }
    }
    if mask == 0 {
        return Row {
            mask,
            gamma: 0,
            rate: 0.0,
            user_ok: false,
        };
    }
    let sinr = desired / ((total - desired).max(0.0) + rp.noise_w);
    let rate = rp.bandwidth_hz * (1.0 + sinr).log2();
    let gamma = if rate > 0.0 {
        (rp.r_min / rate).ceil().max(1.0) as u64
    } else {
        0
    };
    // the largest pairwise spread is max - min
    let toa_ok = r_hi - r_lo <= cfg.toa_distance_budget_m;
    let user_ok = gamma >= 1 && gamma as f64 * rate >= rp.r_min && toa_ok;
    Row {
        mask,
        gamma,
        rate,
        user_ok,
    }
}

fn rows_of(assignment: &ClusterAssignment) -> Vec<u32> {
    (0..assignment.users())
        .map(|k| {
            assignment
                .membership
                .row(k)
                .iter()
                .enumerate()
                .fold(0u32, |acc, (m, &c)| acc | (u32::from(c) << m))
        })
        .collect()
}

/// Evaluates the cluster matrix whose row `k` has bit `m` set iff SBS `m`
/// serves user `k`.
pub fn evaluate_candidate(
    inst: &TinyInstance,
    rp: &RadioParams,
    cfg: &SchemeConfig,
    rows: &[u32],
) -> CandidateVerdict {
    let s = &inst.scenario;
    let sbs = s.num_sbs();
    let evaluated: Vec<Row> = rows
        .iter()
        .enumerate()
        .map(|(k, &mask)| eval_row(s, k, mask, rp, cfg))
        .collect();
    let mut loads = vec![0u64; sbs];
    let mut sum = 0.0;
    for row in &evaluated {
        for (m, load) in loads.iter_mut().enumerate() {
            if row.mask >> m & 1 == 1 {
                *load += row.gamma;
                sum += row.gamma as f64 * row.rate;
            }
        }
    }
    let feasible = evaluated.iter().all(|r| r.user_ok)
        && loads.iter().all(|&l| l <= u64::from(cfg.prb_budget));
    CandidateVerdict {
        feasible,
        gamma: evaluated.iter().map(|r| r.gamma).collect(),
        rate: evaluated.iter().map(|r| r.rate).collect(),
        backhaul: if sbs == 0 { 0.0 } else { sum / sbs as f64 },
    }
}

/// Shorthand for [`evaluate_candidate`] on an existing assignment's matrix.
pub fn evaluate_assignment(
    inst: &TinyInstance,
    rp: &RadioParams,
    cfg: &SchemeConfig,
    assignment: &ClusterAssignment,
) -> CandidateVerdict {
    evaluate_candidate(inst, rp, cfg, &rows_of(assignment))
}

/// Minimum-backhaul cluster matrix over all `2^(K·M)` candidates.
///
/// Ties keep the lexicographically smallest matrix (row-major, `c_00` first,
/// 0 before 1).
pub fn exhaustive_min_backhaul(
    inst: &TinyInstance,
    rp: &RadioParams,
    cfg: &SchemeConfig,
) -> Result<OracleOutcome> {
    let s = &inst.scenario;
    let (users, sbs) = (s.num_users(), s.num_sbs());
    if users > MAX_TINY_USERS || sbs > MAX_TINY_SBS {
        return Err(Error::InstanceTooLarge {
            users,
            sbs,
            max_users: MAX_TINY_USERS,
            max_sbs: MAX_TINY_SBS,
        });
    }
    if sbs == 0 {
        return Ok(OracleOutcome::Infeasible);
    }
    // Per-user candidates that pass the user-local constraints, in
    // lexicographic order of the row (bit of SBS 0 most significant).
    let options: Vec<Vec<Row>> = (0..users)
        .map(|k| {
            let mut rows: Vec<Row> = (0..1u32 << sbs)
                .map(|mask| eval_row(s, k, mask, rp, cfg))
                .filter(|r| r.user_ok)
                .collect();
            rows.sort_by_key(|r| lex_key(r.mask, sbs));
            rows
        })
        .collect();

    let mut search = Search {
        options: &options,
        sbs,
        budget: u64::from(cfg.prb_budget),
        loads: vec![0; sbs],
        picked: vec![0; users],
        best: None,
    };
    search.descend(0, 0.0);

    let Some((picked, cost)) = search.best else {
        return Ok(OracleOutcome::Infeasible);
    };
    let mut assignment = ClusterAssignment::empty(users, sbs);
    for (k, &i) in picked.iter().enumerate() {
        let row = options[k][i];
        for m in 0..sbs {
            assignment.membership[[k, m]] = row.mask >> m & 1 == 1;
        }
        assignment.gamma[k] = row.gamma;
        assignment.rate[k] = row.rate;
        assignment.qos_met[k] = true;
    }
    Ok(OracleOutcome::Optimal {
        assignment,
        backhaul: cost / sbs as f64,
    })
}

fn lex_key(mask: u32, sbs: usize) -> u32 {
    (0..sbs).fold(0, |acc, m| (acc << 1) | (mask >> m & 1))
}

struct Search<'a> {
    options: &'a [Vec<Row>],
    sbs: usize,
    budget: u64,
    loads: Vec<u64>,
    picked: Vec<usize>,
    best: Option<(Vec<usize>, f64)>,
}

impl Search<'_> {
    fn descend(&mut self, k: usize, cost: f64) {
        if k == self.options.len() {
            if self.best.as_ref().is_none_or(|(_, c)| cost < *c) {
                self.best = Some((self.picked.clone(), cost));
            }
            return;
        }
        for i in 0..self.options[k].len() {
            let row = self.options[k][i];
            let fits = (0..self.sbs)
                .all(|m| row.mask >> m & 1 == 0 || self.loads[m] + row.gamma <= self.budget);
            if !fits {
                continue;
            }
            let mut add = 0.0;
            for m in 0..self.sbs {
                if row.mask >> m & 1 == 1 {
                    self.loads[m] += row.gamma;
                    add += row.gamma as f64 * row.rate;
                }
            }
            self.picked[k] = i;
            self.descend(k + 1, cost + add);
            for m in 0..self.sbs {
                if row.mask >> m & 1 == 1 {
                    self.loads[m] -= row.gamma;
                }
            }
        }
    }
}
