//! Seeded random colorings, the side-balanced chain, extension-property
//! checking and the failure-probability bound.
//!
//! Edge colors come from a counter-based stream: the color of edge `(i, j)`
//! under `seed` is a pure function of the triple, so a larger graph drawn
//! from the same seed contains every smaller one as an induced subgraph.

mod sfsp;
mod theta;

pub use sfsp::{bound_ratio_check, estimate_failure_prob, sfsp_bound, BoundEval, FailureEstimate, RatioCheck};
pub use theta::{
    check_theta, check_theta_sampled, check_theta_with_budget, theta_configuration_count, ExtensionReport,
    SampledTheta, ThetaCounterexample, DEFAULT_THETA_BUDGET,
};

use crate::graph::{Color, ColoredBipartiteGraph};

/// The SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(splitmix64(splitmix64(seed) ^ i) ^ j)`, mapped onto
/// `{1, 2, 3}` by `⌊3w / 2^64⌋ + 1`.
pub fn edge_color(seed: u64, i: usize, j: usize) -> Color {
    let w = splitmix64(splitmix64(splitmix64(seed) ^ i as u64) ^ j as u64);
    let c = ((w as u128 * 3) >> 64) as usize + 1;
    Color::from_index(c).expect("value in 1..=3")
}

/// Seed of trial `t` in a multi-trial experiment.
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    splitmix64(splitmix64(seed).wrapping_add(t))
}

pub fn random_graph(m: usize, n: usize, seed: u64) -> ColoredBipartiteGraph {
    let colors = (0..m).flat_map(|i| (0..n).map(move |j| edge_color(seed, i, j))).collect();
    ColoredBipartiteGraph::from_colors(m, n, colors).expect("m*n colors")
}

/// Side sizes of the `i`-th chain member: odd steps add a left vertex, even
/// steps a right one.
pub fn chain_dims(i: usize) -> (usize, usize) {
    (i.div_ceil(2), i / 2)
}

/// `Γ_1 ⊂ Γ_2 ⊂ … ⊂ Γ_N` with `|Γ_i| = i`.
pub fn chain(seed: u64, len: usize) -> Vec<ColoredBipartiteGraph> {
    (1..=len)
        .map(|i| {
            let (m, n) = chain_dims(i);
            random_graph(m, n, seed)
        })
        .collect()
}
