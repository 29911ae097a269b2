use ndarray::Array2;
use rand::Rng;

use crate::channel::{self, received_power, ChannelRealization, FractalParams};
use crate::geometry::{self, PointSet, Region};
use crate::{Error, Result};

/// One network drop: every `K x M` quantity a clustering scheme may look at.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub users: PointSet,
    pub sbs: PointSet,
    pub distance: Array2<f64>,
    pub beta: Array2<f64>,
    pub fading: Array2<f64>,
    pub power: Array2<f64>,
}

impl Scenario {
    /// Samples both point processes, then the channel of every link.
    pub fn sample<R: Rng + ?Sized>(
        lambda_b: f64,
        lambda_u: f64,
        region: &Region,
        fp: &FractalParams,
        tx_power: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let sbs = geometry::sample_ppp(lambda_b, region, rng)?;
        let users = geometry::sample_ppp(lambda_u, region, rng)?;
        let distance = geometry::distance_matrix(&users, &sbs, region);
        let ChannelRealization {
            beta,
            fading,
            power,
        } = channel::realize_channel(&distance, fp, tx_power, rng)?;
        Ok(Self {
            users,
            sbs,
            distance,
            beta,
            fading,
            power,
        })
    }

    /// Builds a scenario from explicit per-link distance, exponent and fading.
    /// Positions are left empty.
    pub fn from_links(
        distance: Array2<f64>,
        beta: Array2<f64>,
        fading: Array2<f64>,
        tx_power: f64,
    ) -> Result<Self> {
        if beta.dim() != distance.dim() || fading.dim() != distance.dim() {
            return Err(Error::param(
                "links",
                "distance, beta and fading shapes differ",
            ));
        }
        let power = Array2::from_shape_fn(distance.dim(), |ix| {
            received_power(tx_power, fading[ix], distance[ix], beta[ix])
        });
        Ok(Self {
            users: PointSet::default(),
            sbs: PointSet::default(),
            distance,
            beta,
            fading,
            power,
        })
    }

    pub fn num_users(&self) -> usize {
        self.distance.nrows()
    }

    pub fn num_sbs(&self) -> usize {
        self.distance.ncols()
    }

    pub fn is_degenerate(&self) -> bool {
        self.num_users() == 0 || self.num_sbs() == 0
    }
}
