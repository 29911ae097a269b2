//! Statistical checks of the samplers against their closed forms.

use jtcomp::channel::{
    beta_cdf, beta_from_rmax, beta_pdf, rmax_cdf, rmax_pdf, sample_fading, sample_rmax,
    FractalParams,
};
use jtcomp::geometry::{sample_ppp, Metric, Region};
use jtcomp::oracle::{binned_density_error, integrate, ks_statistic};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Bins with fewer expected samples than this are compared on an absolute
/// scale; at this count a 5% deviation is four standard errors.
const MIN_EXPECTED_PER_BIN: f64 = 6400.0;

fn ks_critical(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

#[test]
fn ppp_count_mean_and_variance() {
    let region = Region::new(1000.0, Metric::Torus).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let draws = 10_000;
    let counts: Vec<f64> = (0..draws)
        .map(|_| sample_ppp(1e-4, &region, &mut rng).unwrap().len() as f64)
        .collect();
    let n = draws as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
    // Poisson(100): sd of the mean is 0.1, sd of the variance is about sqrt(2·100²/n) ≈ 1.42
    assert!((97.0..=103.0).contains(&mean), "mean {mean}");
    assert!((mean - 100.0).abs() < 4.0 * 0.1, "mean {mean}");
    let var_se = ((100.0 + 2.0 * 100.0 * 100.0) / n).sqrt();
    assert!((var - 100.0).abs() < 4.0 * var_se, "variance {var}");
}

#[test]
fn ppp_user_density_default_region() {
    let region = Region::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mean = (0..400)
        .map(|_| sample_ppp(1e-3, &region, &mut rng).unwrap().len() as f64)
        .sum::<f64>()
        / 400.0;
    // sd of the mean: sqrt(1000/400) ≈ 1.58
    assert!((mean - 1000.0).abs() < 4.0 * 1.59, "{mean}");
}

#[test]
fn ppp_coordinates_are_uniform() {
    let side = 1000.0;
    let region = Region::new(side, Metric::Torus).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for _ in 0..100 {
        for p in sample_ppp(1e-3, &region, &mut rng).unwrap().iter() {
            xs.push(p.x);
            ys.push(p.y);
        }
    }
    let cdf = |v: f64| (v / side).clamp(0.0, 1.0);
    for coord in [&xs, &ys] {
        let d = ks_statistic(coord, cdf).unwrap();
        assert!(
            d < ks_critical(coord.len()),
            "KS {d} over {} points",
            coord.len()
        );
    }
}

#[test]
fn rmax_matches_truncated_power_law() {
    let fp = FractalParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let samples: Vec<f64> = (0..100_000)
        .map(|_| sample_rmax(&mut rng, &fp).unwrap())
        .collect();
    assert!(samples
        .iter()
        .all(|&r| (fp.rho_min..=fp.rho_max).contains(&r)));
    let d = ks_statistic(&samples, |r| rmax_cdf(r, &fp)).unwrap();
    assert!(d < 0.006, "KS statistic {d}");
}

#[test]
fn induced_beta_matches_its_density() {
    let fp = FractalParams::default();
    let (lo, hi) = fp.beta_support();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let betas: Vec<f64> = (0..100_000)
        .map(|_| beta_from_rmax(sample_rmax(&mut rng, &fp).unwrap(), fp.zeta).unwrap())
        .collect();
    assert!(betas.iter().all(|&b| b >= lo && b <= hi));
    let cmp = binned_density_error(
        &betas,
        |b| beta_pdf(b, &fp),
        lo,
        hi,
        50,
        MIN_EXPECTED_PER_BIN,
    )
    .unwrap();
    assert_eq!(cmp.outside, 0);
    assert!(cmp.max_error < 0.05, "{cmp:?}");
    let d = ks_statistic(&betas, |b| beta_cdf(b, &fp)).unwrap();
    assert!(d < ks_critical(betas.len()), "KS {d}");
}

#[test]
fn densities_integrate_to_one() {
    for fp in [
        FractalParams::default(),
        FractalParams::new(1.1, 10.0, 1e4, -8.0).unwrap(),
        FractalParams::new(2.0, 50.0, 5e5, -12.0).unwrap(),
    ] {
        let r = integrate(|r| rmax_pdf(r, &fp), fp.rho_min, fp.rho_max, 1e-12);
        assert!((r - 1.0).abs() < 1e-6, "R_max mass {r} for {fp:?}");
        let (lo, hi) = fp.beta_support();
        let b = integrate(|b| beta_pdf(b, &fp), lo, hi, 1e-12);
        assert!((b - 1.0).abs() < 1e-6, "beta mass {b} for {fp:?}");
    }
}

#[test]
fn beta_density_is_the_change_of_variables() {
    // f_β(b) = f_R(R(b)) · |dR/db| with R(b) = 10^(−ζ/b), checked by finite differences
    let fp = FractalParams::default();
    for b in [2.2, 3.0, 3.7, 4.4, 4.9] {
        let h = 1e-6;
        let numeric = (beta_cdf(b + h, &fp) - beta_cdf(b - h, &fp)) / (2.0 * h);
        let exact = beta_pdf(b, &fp);
        assert!(
            (numeric - exact).abs() / exact < 1e-5,
            "b={b}: {numeric} vs {exact}"
        );
    }
}

#[test]
fn fading_is_unit_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 1_000_000;
    let mut sum = 0.0;
    let mut above_one = 0usize;
    for _ in 0..n {
        let h = sample_fading(&mut rng);
        assert!(h > 0.0);
        sum += h;
        if h > 1.0 {
            above_one += 1;
        }
    }
    let mean = sum / n as f64;
    assert!((0.996..=1.004).contains(&mean), "mean {mean}");
    let tail = above_one as f64 / n as f64;
    assert!((tail - (-1f64).exp()).abs() < 0.003, "P(h > 1) = {tail}");
}
