//! Fractal path-loss exponents, Rayleigh fading and received power.
//!
//! The distance from an SBS to its (irregular) coverage boundary, `R_max`,
//! follows a truncated power law on `[ρ_min, ρ_max]` with fractal parameter
//! `ε`:
//!
//! ```text
//! f(R) = ε / (ρ_min^-ε − ρ_max^-ε) · R^-(ε+1)
//! ```
//!
//! and the link's path-loss exponent is `β = −ζ / log10(R_max)` with
//! `ζ = log10(P_min / P_T)`. Each user-SBS link draws its own `R_max`, so
//! exponents are i.i.d. across links.

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::{Error, Result};

/// Distances below this are treated as this (a user dropped on top of an SBS).
pub const MIN_LINK_DISTANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractalParams {
    pub epsilon: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// `log10(P_min / P_T)`, negative.
    pub zeta: f64,
}

impl Default for FractalParams {
    fn default() -> Self {
        Self {
            epsilon: 1.5,
            rho_min: 100.0,
            rho_max: 1e5,
            zeta: -10.0,
        }
    }
}

impl FractalParams {
    pub fn new(epsilon: f64, rho_min: f64, rho_max: f64, zeta: f64) -> Result<Self> {
        let fp = Self {
            epsilon,
            rho_min,
            rho_max,
            zeta,
        };
        fp.validate()?;
        Ok(fp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 1.0 && self.epsilon <= 2.0) {
            return Err(Error::param(
                "epsilon",
                format!("must lie in (1, 2], got {}", self.epsilon),
            ));
        }
        // rho_min > 1 keeps log10(R_max) positive, so beta stays finite.
        if !(self.rho_min > 1.0 && self.rho_min < self.rho_max && self.rho_max.is_finite()) {
            return Err(Error::param(
                "rho_min/rho_max",
                format!(
                    "need 1 < rho_min < rho_max < inf, got {} and {}",
                    self.rho_min, self.rho_max
                ),
            ));
        }
        if !(self.zeta < 0.0 && self.zeta.is_finite()) {
            return Err(Error::param(
                "zeta",
                format!("must be finite and negative, got {}", self.zeta),
            ));
        }
        Ok(())
    }

    /// Closed support `[β_lo, β_hi]` of the path-loss exponent.
    pub fn beta_support(&self) -> (f64, f64) {
        (
            -self.zeta / self.rho_max.log10(),
            -self.zeta / self.rho_min.log10(),
        )
    }

    fn tail_mass(&self) -> f64 {
        self.rho_min.powf(-self.epsilon) - self.rho_max.powf(-self.epsilon)
    }
}

/// Inverse CDF of `R_max`, clamped to `[ρ_min, ρ_max]` against rounding.
pub fn rmax_from_uniform(u: f64, fp: &FractalParams) -> f64 {
    let lo = fp.rho_min.powf(-fp.epsilon);
    let r = (lo - u * fp.tail_mass()).powf(-1.0 / fp.epsilon);
    r.clamp(fp.rho_min, fp.rho_max)
}

pub fn sample_rmax<R: Rng + ?Sized>(rng: &mut R, fp: &FractalParams) -> Result<f64> {
    fp.validate()?;
    Ok(rmax_from_uniform(rng.random::<f64>(), fp))
}

/// `β = −ζ / log10(R_max)`.
pub fn beta_from_rmax(r_max: f64, zeta: f64) -> Result<f64> {
    if r_max.is_nan() || r_max <= 1.0 {
        return Err(Error::param(
            "r_max",
            format!("must exceed 1 m so log10 is positive, got {r_max}"),
        ));
    }
    if zeta.is_nan() || zeta >= 0.0 {
        return Err(Error::param(
            "zeta",
            format!("must be negative, got {zeta}"),
        ));
    }
    Ok(-zeta / r_max.log10())
}

/// Unit-mean exponential power gain (Rayleigh amplitude).
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Exp1 can return exactly 0 with vanishing probability; keep the gain positive.
    let h: f64 = Exp1.sample(rng);
    h.max(f64::MIN_POSITIVE)
}

pub fn rmax_pdf(r: f64, fp: &FractalParams) -> f64 {
    if r < fp.rho_min || r > fp.rho_max {
        return 0.0;
    }
    fp.epsilon / fp.tail_mass() * r.powf(-(fp.epsilon + 1.0))
}

pub fn rmax_cdf(r: f64, fp: &FractalParams) -> f64 {
    if r <= fp.rho_min {
        0.0
    } else if r >= fp.rho_max {
        1.0
    } else {
        (fp.rho_min.powf(-fp.epsilon) - r.powf(-fp.epsilon)) / fp.tail_mass()
    }
}

pub fn beta_pdf(beta: f64, fp: &FractalParams) -> f64 {
    let (lo, hi) = fp.beta_support();
    if beta < lo || beta > hi {
        return 0.0;
    }
    let eps = fp.epsilon;
    -eps * std::f64::consts::LN_10 / fp.tail_mass() * 10f64.powf(fp.zeta / beta * eps) * fp.zeta
        / (beta * beta)
}

/// CDF of `β`; `β ≤ b` iff `R_max ≥ 10^(−ζ/b)`.
pub fn beta_cdf(beta: f64, fp: &FractalParams) -> f64 {
    let (lo, hi) = fp.beta_support();
    if beta <= lo {
        0.0
    } else if beta >= hi {
        1.0
    } else {
        1.0 - rmax_cdf(10f64.powf(-fp.zeta / beta), fp)
    }
}

/// Per-link exponents, fading gains and received powers, all `K x M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub beta: Array2<f64>,
    pub fading: Array2<f64>,
    pub power: Array2<f64>,
}

/// Received power `P = P_T · h · r^−β`.
pub fn received_power(tx_power: f64, fading: f64, distance: f64, beta: f64) -> f64 {
    tx_power * fading * distance.max(MIN_LINK_DISTANCE).powf(-beta)
}

/// Draws `β` and `h` for every link in row-major order and builds `P`.
pub fn realize_channel<R: Rng + ?Sized>(
    distance: &Array2<f64>,
    fp: &FractalParams,
    tx_power: f64,
    rng: &mut R,
) -> Result<ChannelRealization> {
    fp.validate()?;
    if !(tx_power.is_finite() && tx_power > 0.0) {
        return Err(Error::param(
            "tx_power",
            format!("must be finite and positive, got {tx_power}"),
        ));
    }
    if let Some(bad) = distance.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::param(
            "distance",
            format!("must be finite and non-negative, got {bad}"),
        ));
    }
    let dim = distance.dim();
    let mut beta = Array2::zeros(dim);
    let mut fading = Array2::zeros(dim);
    for ((b, h), _) in beta.iter_mut().zip(fading.iter_mut()).zip(distance.iter()) {
        let r_max = rmax_from_uniform(rng.random::<f64>(), fp);
        *b = beta_from_rmax(r_max, fp.zeta)?;
        *h = sample_fading(rng);
    }
    let power = Array2::from_shape_fn(dim, |ix| {
        received_power(tx_power, fading[ix], distance[ix], beta[ix])
    });
    Ok(ChannelRealization {
        beta,
        fading,
        power,
    })
}
