#![allow(dead_code)]

use nalgebra::DVector;
use netgame::{regular_wbar_bound, GameConfig, JointProblem, Network, SolverOptions};
use rand::Rng;

pub fn triangle_ghat() -> Network {
    Network::from_rows(
        &[
            vec![0.0, 0.3, 0.5],
            vec![0.3, 0.0, 0.7],
            vec![0.5, 0.7, 0.0],
        ],
        1.0,
    )
    .unwrap()
}

pub fn triangle(phi: f64) -> GameConfig {
    GameConfig::new(phi, DVector::from_vec(vec![0.4, 0.2, 0.6]), triangle_ghat()).unwrap()
}

pub fn four_ghat() -> Network {
    Network::from_rows(
        &[
            vec![0.0, 0.6, 0.7, 0.7],
            vec![0.6, 0.0, 0.7, 0.3],
            vec![0.7, 0.7, 0.0, 0.3],
            vec![0.7, 0.3, 0.3, 0.0],
        ],
        1.0,
    )
    .unwrap()
}

pub const FOUR_GSTAR: [[f64; 4]; 4] = [
    [0.0, 0.493, 0.962, 0.913],
    [0.493, 0.0, 0.795, 0.377],
    [0.962, 0.795, 0.0, 0.112],
    [0.913, 0.377, 0.112, 0.0],
];

pub const FOUR_U: [f64; 4] = [0.642, 0.232, -0.567, -0.461];

pub fn four() -> JointProblem {
    let cfg = GameConfig::new(-0.2, DVector::zeros(4), four_ghat()).unwrap();
    JointProblem::new(cfg, 0.5, 1.5, SolverOptions::default()).unwrap()
}

pub fn five_ghat() -> Network {
    Network::from_rows(
        &[
            vec![0.0, 0.14, 0.23, 0.63, 0.05],
            vec![0.14, 0.0, 0.25, 0.14, 0.46],
            vec![0.23, 0.25, 0.0, 0.09, 0.39],
            vec![0.63, 0.14, 0.09, 0.0, 0.11],
            vec![0.05, 0.46, 0.39, 0.11, 0.0],
        ],
        1.0,
    )
    .unwrap()
}

pub const FIVE_GSTAR_C4: [[f64; 5]; 5] = [
    [0.0, 0.71, 0.80, 1.0, 0.62],
    [0.71, 0.0, 0.84, 0.69, 1.0],
    [0.80, 0.84, 0.0, 0.64, 0.99],
    [1.0, 0.69, 0.64, 0.0, 0.66],
    [0.62, 1.0, 0.99, 0.66, 0.0],
];

pub fn five(c: f64) -> JointProblem {
    let cfg = GameConfig::new(0.15, DVector::zeros(5), five_ghat()).unwrap();
    JointProblem::new(cfg, 0.5, c, SolverOptions::default()).unwrap()
}

/// Symmetric network with links drawn uniformly from `[lo·wbar, hi·wbar]`.
pub fn random_network(rng: &mut impl Rng, n: usize, wbar: f64, lo: f64, hi: f64) -> Network {
    let links: Vec<f64> = (0..n * (n - 1) / 2)
        .map(|_| wbar * rng.random_range(lo..hi))
        .collect();
    Network::from_upper(n, wbar, &links)
}

/// Interaction strength of the given sign, between 10% and 90% of the
/// largest value for which every network in the box with `wbar` is regular.
pub fn random_phi(rng: &mut impl Rng, n: usize, wbar: f64, sign: f64) -> f64 {
    let bound = regular_wbar_bound(sign, n).unwrap() / wbar;
    sign * bound * rng.random_range(0.1..0.9)
}

pub fn max_abs_diff<const N: usize>(g: &Network, expected: &[[f64; N]; N]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in expected.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            worst = worst.max((g.weight(i, j) - e).abs());
        }
    }
    worst
}
