use crate::{Error, Result};

/// One-sample Kolmogorov-Smirnov statistic `sup |F_n(x) − F(x)|`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::NotEnoughSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::NanSample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d.max(above).max(below)
    });
    Ok(d)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 50)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinnedComparison {
    /// Largest `|observed − expected| / max(expected, floor)` over bins.
    pub max_error: f64,
    pub worst_bin: usize,
    /// Density at which a bin expects `min_expected_count` samples. Bins
    /// sparser than this are judged on absolute error at this scale.
    pub floor_density: f64,
    /// Samples that fell outside `[lo, hi]`.
    pub outside: usize,
}

/// Compares a histogram of `samples` on `bins` equal bins of `[lo, hi]` with
/// the bin-averaged `pdf`.
pub fn binned_density_error(
    samples: &[f64],
    pdf: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    bins: usize,
    min_expected_count: f64,
) -> Result<BinnedComparison> {
    if samples.is_empty() {
        return Err(Error::NotEnoughSamples { needed: 1, got: 0 });
    }
    if hi.is_nan() || lo.is_nan() || hi <= lo || bins == 0 {
        return Err(Error::param("bins", "need hi > lo and at least one bin"));
    }
    let n = samples.len() as f64;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut outside = 0;
    for &x in samples {
        if x.is_nan() {
            return Err(Error::NanSample);
        }
        if x < lo || x > hi {
            outside += 1;
            continue;
        }
        let i = (((x - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let floor_density = min_expected_count / (n * width);
    let mut worst = (0.0, 0);
    for (i, &c) in counts.iter().enumerate() {
        let a = lo + i as f64 * width;
        let expected = integrate(&pdf, a, a + width, 1e-12) / width;
        let observed = c as f64 / (n * width);
        let err = (observed - expected).abs() / expected.max(floor_density);
        if err > worst.0 {
            worst = (err, i);
        }
    }
    Ok(BinnedComparison {
        max_error: worst.0,
        worst_bin: worst.1,
        floor_density,
        outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_cdf(x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    #[test]
    fn ks_needs_samples() {
        assert!(ks_statistic(&[], uniform_cdf).is_err());
        assert!(ks_statistic(&[0.5], uniform_cdf).is_err());
        assert!(ks_statistic(&[0.5, f64::NAN], uniform_cdf).is_err());
    }

    #[test]
    fn ks_constant_samples() {
        let d = ks_statistic(&[0.3; 100], uniform_cdf).unwrap();
        assert!(d >= 0.5, "{d}");
    }

    #[test]
    fn ks_order_invariant() {
        let xs = [0.9, 0.1, 0.5, 0.35, 0.77];
        let mut sorted = xs;
        sorted.sort_by(f64::total_cmp);
        assert_eq!(
            ks_statistic(&xs, uniform_cdf).unwrap(),
            ks_statistic(&sorted, uniform_cdf).unwrap()
        );
    }

    #[test]
    fn ks_exact_small_case() {
        // F_n jumps to 1/2 at 0.25 and to 1 at 0.5: sup is 0.5 just before 1.0
        let d = ks_statistic(&[0.25, 0.5], uniform_cdf).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_reference_samples_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let xs: Vec<f64> = (0..100_000).map(|_| rng.random::<f64>()).collect();
        let d = ks_statistic(&xs, uniform_cdf).unwrap();
        assert!(d < 1.63 / (xs.len() as f64).sqrt(), "{d}");
    }

    #[test]
    fn quadrature_known_integrals() {
        assert!((integrate(|x| x * x, 0.0, 3.0, 1e-12) - 9.0).abs() < 1e-10);
        assert!((integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-12) - 2.0).abs() < 1e-10);
        let p = integrate(|x: f64| x.powf(-2.5), 100.0, 1e5, 1e-14);
        let exact = (100f64.powf(-1.5) - 1e5f64.powf(-1.5)) / 1.5;
        assert!((p - exact).abs() / exact < 1e-9);
    }

    #[test]
    fn binned_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let xs: Vec<f64> = (0..200_000).map(|_| rng.random::<f64>()).collect();
        let cmp = binned_density_error(&xs, |_| 1.0, 0.0, 1.0, 20, 6400.0).unwrap();
        assert_eq!(cmp.outside, 0);
        assert!(cmp.max_error < 0.05, "{cmp:?}");
        // a wrong density is caught
        let bad = binned_density_error(&xs, |x| 2.0 * x, 0.0, 1.0, 20, 6400.0).unwrap();
        assert!(bad.max_error > 0.5);
    }
}
