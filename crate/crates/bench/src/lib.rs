//! Fixtures shared by the benchmarks.

use jtcomp::channel::realize_channel;
use jtcomp::geometry::{distance_matrix, Point, PointSet};
use jtcomp::{Scenario, SimParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `users` and `sbs` uniform points in the reference region with a fractal
/// channel; fixed counts instead of Poisson ones so sizes are exact.
pub fn fixed_size_scenario(users: usize, sbs: usize, seed: u64) -> Scenario {
    let p = SimParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = p.region.side_length();
    let mut points = |n: usize| {
        PointSet(
            (0..n)
                .map(|_| Point {
                    x: rng.random_range(0.0..side),
                    y: rng.random_range(0.0..side),
                })
                .collect(),
        )
    };
    let (u, b) = (points(users), points(sbs));
    let distance = distance_matrix(&u, &b, &p.region);
    let ch = realize_channel(&distance, &p.fractal, p.radio.tx_power_w, &mut rng)
        .expect("reference parameters are valid");
    Scenario::from_links(distance, ch.beta, ch.fading, p.radio.tx_power_w).expect("shapes match")
}
