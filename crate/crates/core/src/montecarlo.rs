//! Monte Carlo drops, aggregation and parameter sweeps.
//!
//! Drop `i` draws from its own ChaCha stream (`seed = master_seed`,
//! `stream = i`), so a drop's result does not depend on which thread ran it
//! or on how many drops the experiment has. Aggregation folds drop results
//! in index order. All schemes in a drop see the same [`Scenario`].

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::FractalParams;
use crate::clustering::{assign, check_constraints, Scheme, SchemeConfig};
use crate::geometry::Region;
use crate::radio::{network_backhaul, RadioParams};
use crate::{Error, Result, Scenario};

/// Attempts at drawing a drop with at least one user and one SBS.
pub const MAX_RESAMPLES: u32 = 100;

/// z-value of a two-sided 95% normal interval.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    /// SBS intensity per m².
    pub lambda_b: f64,
    /// User intensity per m².
    pub lambda_u: f64,
    pub region: Region,
    pub fractal: FractalParams,
    pub radio: RadioParams,
    pub scheme_cfg: SchemeConfig,
    pub schemes: Vec<Scheme>,
    pub drops: u32,
    pub master_seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            lambda_b: 1e-4,
            lambda_u: 1e-3,
            region: Region::default(),
            fractal: FractalParams::default(),
            radio: RadioParams::default(),
            scheme_cfg: SchemeConfig::default(),
            schemes: Scheme::ALL.to_vec(),
            drops: 200,
            master_seed: 1,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda_b", self.lambda_b), ("lambda_u", self.lambda_u)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(
                    name,
                    format!("must be finite and non-negative, got {v}"),
                ));
            }
        }
        if self.drops == 0 {
            return Err(Error::param("drops", "must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(Error::param("schemes", "select at least one scheme"));
        }
        self.fractal.validate()?;
        self.radio.validate()?;
        self.scheme_cfg.validate()
    }
}

pub fn drop_rng(master_seed: u64, drop_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(drop_index);
    rng
}

/// Draws scenarios until one has users and SBSs; returns it with the number
/// of discarded draws.
pub fn sample_scenario(p: &SimParams, rng: &mut ChaCha8Rng) -> Result<(Scenario, u32)> {
    for resamples in 0..MAX_RESAMPLES {
        let s = Scenario::sample(
            p.lambda_b,
            p.lambda_u,
            &p.region,
            &p.fractal,
            p.radio.tx_power_w,
            rng,
        )?;
        if !s.is_degenerate() {
            return Ok((s, resamples));
        }
    }
    Err(Error::EmptyNetwork {
        resamples: MAX_RESAMPLES,
    })
}

/// Metrics of one scheme on one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeMetrics {
    pub scheme: Scheme,
    /// Mean `R_k` over served users; NaN when nobody is served.
    pub mean_rate: f64,
    pub backhaul: f64,
    pub qos_fraction: f64,
    pub unserved_fraction: f64,
    /// Mean cluster size over served users; NaN when nobody is served.
    pub mean_cluster_size: f64,
    pub prb_utilization: f64,
    /// Served users with `γ_k R_k < R_min`.
    pub eq11_violations: usize,
    /// SBSs loaded beyond Ω.
    pub eq12_violations: usize,
    /// Served users with `γ_k < 1`.
    pub eq13_violations: usize,
    /// Users without any serving SBS.
    pub eq14_violations: usize,
    /// Users whose cluster spreads wider than the ToA budget.
    pub eq15_violations: usize,
}

pub fn evaluate_scheme(
    scenario: &Scenario,
    scheme: Scheme,
    cfg: &SchemeConfig,
    rp: &RadioParams,
) -> Result<SchemeMetrics> {
    let (assignment, ledger) = assign(scheme, scenario, cfg, rp)?;
    let report = check_constraints(&assignment, scenario, rp, cfg);
    let users = scenario.num_users();
    let served: Vec<usize> = (0..users).filter(|&k| assignment.is_served(k)).collect();
    let mean_over_served = |f: &dyn Fn(usize) -> f64| {
        if served.is_empty() {
            f64::NAN
        } else {
            served.iter().map(|&k| f(k)).sum::<f64>() / served.len() as f64
        }
    };
    let frac = |n: usize| {
        if users == 0 {
            0.0
        } else {
            n as f64 / users as f64
        }
    };
    Ok(SchemeMetrics {
        scheme,
        mean_rate: mean_over_served(&|k| assignment.rate[k]),
        backhaul: network_backhaul(&assignment, &assignment.rate, scenario.num_sbs())?,
        qos_fraction: frac(assignment.qos_met.iter().filter(|&&q| q).count()),
        unserved_fraction: frac(users - served.len()),
        mean_cluster_size: mean_over_served(&|k| assignment.cluster_size(k) as f64),
        prb_utilization: ledger.utilization(),
        eq11_violations: report.eq11_violations_served(),
        eq12_violations: report.eq12_violations(),
        eq13_violations: report.eq13_violations_served(),
        eq14_violations: report.eq14_violations(),
        eq15_violations: report.eq15_violations(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DropResult {
    pub drop_index: u64,
    pub users: usize,
    pub sbs: usize,
    pub resamples: u32,
    pub schemes: Vec<SchemeMetrics>,
}

pub fn run_drop(p: &SimParams, drop_index: u64) -> Result<DropResult> {
    p.validate()?;
    let mut rng = drop_rng(p.master_seed, drop_index);
    let (scenario, resamples) = sample_scenario(p, &mut rng)?;
    let schemes = p
        .schemes
        .iter()
        .map(|&s| evaluate_scheme(&scenario, s, &p.scheme_cfg, &p.radio))
        .collect::<Result<Vec<_>>>()?;
    Ok(DropResult {
        drop_index,
        users: scenario.num_users(),
        sbs: scenario.num_sbs(),
        resamples,
        schemes,
    })
}

/// Mean, sample standard deviation and 95% normal-approximation half-width
/// of the finite values of a metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std_dev: f64,
    /// `None` with fewer than two values.
    pub ci_half_width: Option<f64>,
    pub count: usize,
}

impl Summary {
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let xs: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std_dev: f64::NAN,
                ci_half_width: None,
                count: 0,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self {
                mean,
                std_dev: f64::NAN,
                ci_half_width: None,
                count: 1,
            };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let std_dev = var.sqrt();
        Self {
            mean,
            std_dev,
            ci_half_width: Some(Z95 * std_dev / (n as f64).sqrt()),
            count: n,
        }
    }

    /// Half-width, or 0 when undefined.
    pub fn half_width(&self) -> f64 {
        self.ci_half_width.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeAggregate {
    pub scheme: Scheme,
    pub mean_rate: Summary,
    pub backhaul: Summary,
    pub qos_fraction: Summary,
    pub unserved_fraction: Summary,
    pub mean_cluster_size: Summary,
    pub prb_utilization: Summary,
    pub eq11_violations: u64,
    pub eq12_violations: u64,
    pub eq13_violations: u64,
    pub eq14_violations: u64,
    pub eq15_violations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub drops: usize,
    pub resamples: u64,
    pub schemes: Vec<SchemeAggregate>,
}

impl AggregateResult {
    pub fn scheme(&self, scheme: Scheme) -> Option<&SchemeAggregate> {
        self.schemes.iter().find(|s| s.scheme == scheme)
    }
}

/// Folds drop results (in the given order) into per-scheme summaries.
pub fn aggregate(drops: &[DropResult]) -> AggregateResult {
    let schemes: Vec<Scheme> = drops
        .first()
        .map(|d| d.schemes.iter().map(|m| m.scheme).collect())
        .unwrap_or_default();
    let per_scheme = schemes
        .iter()
        .enumerate()
        .map(|(i, &scheme)| {
            let rows: Vec<&SchemeMetrics> = drops.iter().map(|d| &d.schemes[i]).collect();
            let summary =
                |f: fn(&SchemeMetrics) -> f64| Summary::from_values(rows.iter().map(|m| f(m)));
            let total = |f: fn(&SchemeMetrics) -> usize| rows.iter().map(|m| f(m) as u64).sum();
            SchemeAggregate {
                scheme,
                mean_rate: summary(|m| m.mean_rate),
                backhaul: summary(|m| m.backhaul),
                qos_fraction: summary(|m| m.qos_fraction),
                unserved_fraction: summary(|m| m.unserved_fraction),
                mean_cluster_size: summary(|m| m.mean_cluster_size),
                prb_utilization: summary(|m| m.prb_utilization),
                eq11_violations: total(|m| m.eq11_violations),
                eq12_violations: total(|m| m.eq12_violations),
                eq13_violations: total(|m| m.eq13_violations),
                eq14_violations: total(|m| m.eq14_violations),
                eq15_violations: total(|m| m.eq15_violations),
            }
        })
        .collect();
    AggregateResult {
        drops: drops.len(),
        resamples: drops.iter().map(|d| u64::from(d.resamples)).sum(),
        schemes: per_scheme,
    }
}

/// Runs drops `0..p.drops` on the current rayon pool and returns them in
/// index order.
pub fn run_drops(p: &SimParams) -> Result<Vec<DropResult>> {
    p.validate()?;
    (0..u64::from(p.drops))
        .into_par_iter()
        .map(|i| run_drop(p, i))
        .collect()
}

pub fn run_experiment(p: &SimParams) -> Result<AggregateResult> {
    Ok(aggregate(&run_drops(p)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    LambdaB,
    LambdaU,
    RMin,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::LambdaB => "lambda_B",
            SweepAxis::LambdaU => "lambda_U",
            SweepAxis::RMin => "R_min",
        }
    }

    pub fn apply(self, p: &mut SimParams, value: f64) {
        match self {
            SweepAxis::LambdaB => p.lambda_b = value,
            SweepAxis::LambdaU => p.lambda_u = value,
            SweepAxis::RMin => p.radio.r_min = value,
        }
    }

    pub fn current(self, p: &SimParams) -> f64 {
        match self {
            SweepAxis::LambdaB => p.lambda_b,
            SweepAxis::LambdaU => p.lambda_u,
            SweepAxis::RMin => p.radio.r_min,
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lambda_b" => Ok(SweepAxis::LambdaB),
            "lambda_u" => Ok(SweepAxis::LambdaU),
            "r_min" => Ok(SweepAxis::RMin),
            _ => Err(Error::param(
                "axis",
                format!("unknown sweep axis `{s}` (expected lambda_B, lambda_U or R_min)"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: AggregateResult,
}

/// One experiment per value, all with the same master seed, in input order.
pub fn sweep(p: &SimParams, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::param("values", "sweep needs at least one value"));
    }
    values
        .iter()
        .map(|&value| {
            let mut q = p.clone();
            axis.apply(&mut q, value);
            run_experiment(&q).map(|result| SweepPoint { value, result })
        })
        .collect()
}
