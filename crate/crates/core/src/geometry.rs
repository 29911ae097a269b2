//! Square deployment region, homogeneous Poisson point processes and the
//! user-to-SBS distance metric.

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    /// Wrap-around distance; removes edge effects from interference sums.
    #[default]
    Torus,
    Plane,
}

/// The square `[0, side_length)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    side_length: f64,
    metric: Metric,
}

impl Region {
    pub fn new(side_length: f64, metric: Metric) -> Result<Self> {
        if !(side_length.is_finite() && side_length > 0.0) {
            return Err(Error::param(
                "side_length",
                format!("must be finite and positive, got {side_length}"),
            ));
        }
        Ok(Self {
            side_length,
            metric,
        })
    }

    pub fn side_length(&self) -> f64 {
        self.side_length
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn area(&self) -> f64 {
        self.side_length * self.side_length
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..self.side_length).contains(&p.x) && (0.0..self.side_length).contains(&p.y)
    }
}

impl Default for Region {
    fn default() -> Self {
        Self {
            side_length: 1000.0,
            metric: Metric::Torus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointSet(pub Vec<Point>);

impl PointSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.0.iter()
    }
}

impl From<Vec<Point>> for PointSet {
    fn from(points: Vec<Point>) -> Self {
        Self(points)
    }
}

/// Samples a homogeneous PPP of the given intensity (points per m²).
///
/// The count is drawn first, then each point's `x` and `y`, so the output is a
/// pure function of the generator state.
pub fn sample_ppp<R: Rng + ?Sized>(
    intensity: f64,
    region: &Region,
    rng: &mut R,
) -> Result<PointSet> {
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(Error::param(
            "intensity",
            format!("must be finite and non-negative, got {intensity}"),
        ));
    }
    let mean = intensity * region.area();
    if mean == 0.0 {
        return Ok(PointSet::default());
    }
    let poisson = Poisson::new(mean).map_err(|e| Error::param("intensity", e.to_string()))?;
    let count = poisson.sample(rng) as usize;
    let side = region.side_length();
    let points = (0..count)
        .map(|_| {
            let x = rng.random_range(0.0..side);
            let y = rng.random_range(0.0..side);
            Point::new(x, y)
        })
        .collect();
    Ok(PointSet(points))
}

pub fn distance(p: Point, q: Point, region: &Region) -> f64 {
    let mut dx = (p.x - q.x).abs();
    let mut dy = (p.y - q.y).abs();
    if region.metric() == Metric::Torus {
        let side = region.side_length();
        dx = dx.min(side - dx);
        dy = dy.min(side - dy);
    }
    dx.hypot(dy)
}

/// `K x M` matrix of user-to-SBS distances.
pub fn distance_matrix(users: &PointSet, sbs: &PointSet, region: &Region) -> Array2<f64> {
    Array2::from_shape_fn((users.len(), sbs.len()), |(k, m)| {
        distance(users.0[k], sbs.0[m], region)
    })
}
