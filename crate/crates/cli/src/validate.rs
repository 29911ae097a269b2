//! Self-validation battery behind `jtcomp validate`.

use std::fmt;

use jtcomp::channel::{beta_from_rmax, beta_pdf, rmax_cdf, rmax_pdf, sample_fading, sample_rmax};
use jtcomp::clustering::{assign, check_constraints};
use jtcomp::geometry::sample_ppp;
use jtcomp::montecarlo::{drop_rng, sample_scenario};
use jtcomp::oracle::{
    binned_density_error, evaluate_assignment, exhaustive_min_backhaul, integrate, ks_statistic,
    OracleOutcome, TinyInstance,
};
use jtcomp::{FractalParams, Scheme, SchemeConfig, SimParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deliberate defects used to show that the battery catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fault {
    /// Draw β from a fractal model with a 10x wider `ρ` range.
    BetaSupport,
    /// Run DRC without the distance-difference gate.
    DistanceGate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub observed: String,
    pub requirement: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status}  {:<28} observed {}  (required {})",
            self.name, self.observed, self.requirement
        )
    }
}

fn check(
    name: &'static str,
    passed: bool,
    observed: String,
    requirement: impl Into<String>,
) -> Check {
    Check {
        name,
        passed,
        observed,
        requirement: requirement.into(),
    }
}

pub const DISTRIBUTION_SAMPLES: usize = 100_000;
const TINY_INSTANCES: usize = 20;
const CONSTRAINT_DROPS: u64 = 20;

/// Runs every check with the reference parameters.
pub fn run_all(seed: u64, fault: Option<Fault>) -> Vec<Check> {
    let p = SimParams::default();
    let mut checks = distribution_checks(&p.fractal, seed, fault);
    checks.push(ppp_check(&p, seed));
    checks.push(oracle_check(seed));
    checks.extend(constraint_checks(&p, seed, fault));
    checks
}

fn distribution_checks(fp: &FractalParams, seed: u64, fault: Option<Fault>) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rmax: Vec<f64> = (0..DISTRIBUTION_SAMPLES)
        .map(|_| sample_rmax(&mut rng, fp).expect("validated parameters"))
        .collect();
    let ks = ks_statistic(&rmax, |r| rmax_cdf(r, fp)).unwrap_or(f64::INFINITY);

    let sampler = match fault {
        Some(Fault::BetaSupport) => FractalParams {
            rho_min: fp.rho_min / 10.0,
            rho_max: fp.rho_max * 10.0,
            ..*fp
        },
        _ => *fp,
    };
    let beta: Vec<f64> = (0..DISTRIBUTION_SAMPLES)
        .map(|_| {
            let r = sample_rmax(&mut rng, &sampler).expect("validated parameters");
            beta_from_rmax(r, sampler.zeta).expect("R_max above 1 m")
        })
        .collect();
    let (lo, hi) = fp.beta_support();
    let outside = beta.iter().filter(|&&b| b < lo || b > hi).count();
    let (b_min, b_max) = beta
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let binned = binned_density_error(&beta, |b| beta_pdf(b, fp), lo, hi, 50, 6400.0)
        .map(|c| c.max_error)
        .unwrap_or(f64::INFINITY);

    let r_mass = integrate(|r| rmax_pdf(r, fp), fp.rho_min, fp.rho_max, 1e-12);
    let b_mass = integrate(|b| beta_pdf(b, fp), lo, hi, 1e-12);

    let fading_mean = (0..DISTRIBUTION_SAMPLES)
        .map(|_| sample_fading(&mut rng))
        .sum::<f64>()
        / DISTRIBUTION_SAMPLES as f64;
    let fading_tol = 4.0 / (DISTRIBUTION_SAMPLES as f64).sqrt();

    vec![
        check(
            "R_max KS statistic",
            ks < 0.006,
            format!("{ks:.5}"),
            "< 0.006",
        ),
        check(
            "beta support",
            outside == 0,
            format!("{outside} outside, range [{b_min:.4}, {b_max:.4}]"),
            format!("all in [{lo}, {hi}]"),
        ),
        check(
            "beta binned density error",
            binned < 0.05,
            format!("{binned:.4}"),
            "< 0.05 over 50 bins",
        ),
        check(
            "R_max pdf normalization",
            (r_mass - 1.0).abs() < 1e-6,
            format!("{r_mass:.10}"),
            "1 ± 1e-6",
        ),
        check(
            "beta pdf normalization",
            (b_mass - 1.0).abs() < 1e-6,
            format!("{b_mass:.10}"),
            "1 ± 1e-6",
        ),
        check(
            "fading mean",
            (fading_mean - 1.0).abs() < fading_tol,
            format!("{fading_mean:.5}"),
            format!("1 ± {fading_tol:.4}"),
        ),
    ]
}

fn ppp_check(p: &SimParams, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5050);
    let draws = 2000;
    let expected = p.lambda_b * p.region.area();
    let mean = (0..draws)
        .map(|_| sample_ppp(p.lambda_b, &p.region, &mut rng).map_or(0, |s| s.len()) as f64)
        .sum::<f64>()
        / draws as f64;
    let tol = 4.0 * (expected / draws as f64).sqrt();
    check(
        "SBS count mean",
        (mean - expected).abs() < tol,
        format!("{mean:.3}"),
        format!("{expected} ± {tol:.3}"),
    )
}

/// DRC against the exhaustive oracle on small random instances.
fn oracle_check(seed: u64) -> Check {
    let p = SimParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0AC1E);
    let cfg = SchemeConfig {
        prb_budget: 6,
        ..p.scheme_cfg
    };
    let mut compared = 0;
    let mut worst_gap = 1.0f64;
    let mut problems = Vec::new();
    for i in 0..TINY_INSTANCES {
        let (users, sbs) = (1 + i % 4, 2 + i % 5);
        let inst =
            match TinyInstance::random(&mut rng, users, sbs, 300.0, &p.fractal, p.radio.tx_power_w)
            {
                Ok(inst) => inst,
                Err(e) => {
                    problems.push(format!("instance {i}: {e}"));
                    continue;
                }
            };
        let Ok((a, _)) = assign(Scheme::Drc, inst.scenario(), &cfg, &p.radio) else {
            problems.push(format!("instance {i}: DRC failed"));
            continue;
        };
        if !a.qos_met.iter().all(|&q| q) {
            continue;
        }
        let verdict = evaluate_assignment(&inst, &p.radio, &cfg, &a);
        match exhaustive_min_backhaul(&inst, &p.radio, &cfg) {
            Ok(OracleOutcome::Optimal { backhaul, .. }) if verdict.feasible => {
                if verdict.backhaul + 1e-9 < backhaul {
                    problems.push(format!("instance {i}: DRC below optimum"));
                }
                worst_gap = worst_gap.max(verdict.backhaul / backhaul);
                compared += 1;
            }
            _ => problems.push(format!("instance {i}: DRC output not oracle-feasible")),
        }
    }
    let observed = if problems.is_empty() {
        format!("{compared} compared, worst gap ratio {worst_gap:.4}")
    } else {
        problems.join("; ")
    };
    check(
        "DRC vs exhaustive oracle",
        problems.is_empty() && compared > 0,
        observed,
        "feasible and >= optimum",
    )
}

/// DRC constraint report over default drops.
fn constraint_checks(p: &SimParams, seed: u64, fault: Option<Fault>) -> Vec<Check> {
    let run_cfg = match fault {
        Some(Fault::DistanceGate) => SchemeConfig {
            toa_distance_budget_m: 1e12,
            ..p.scheme_cfg
        },
        _ => p.scheme_cfg,
    };
    let mut capacity = 0;
    let mut min_prb = 0;
    let mut coverage = 0;
    let mut toa = 0;
    let mut qos_flag = 0;
    let mut errors = 0;
    for i in 0..CONSTRAINT_DROPS {
        let mut rng = drop_rng(seed, i);
        let Ok((s, _)) = sample_scenario(p, &mut rng) else {
            errors += 1;
            continue;
        };
        let Ok((a, _)) = assign(Scheme::Drc, &s, &run_cfg, &p.radio) else {
            errors += 1;
            continue;
        };
        let r = check_constraints(&a, &s, &p.radio, &p.scheme_cfg);
        capacity += r.eq12_violations();
        min_prb += r.eq13_violations_served();
        coverage += (0..a.users())
            .filter(|&k| a.is_served(k) && !r.coverage[k])
            .count();
        toa += r.eq15_violations();
        qos_flag += (0..a.users())
            .filter(|&k| a.qos_met[k] && !r.qos[k])
            .count();
    }
    let zero = |name, n: usize| check(name, n == 0 && errors == 0, format!("{n} violations"), "0");
    vec![
        zero("PRB capacity", capacity),
        zero("minimum PRB (served)", min_prb),
        zero("coverage (served)", coverage),
        zero("distance-difference gate", toa),
        zero("qos flag implies rate", qos_flag),
    ]
}
