//! Random potentials from Hilbert bricks and the experiments run on them.

mod brick;
mod experiments;
mod gauge;
mod rng;

pub use brick::{
    gap_of_sum, sample_brick, sample_with_frozen, BrickSample, FrozenLevels, PerturbedPotential, MAX_BRICK_LEVEL,
};
pub use experiments::*;
pub use gauge::{Gauge, GaugeRule, Regime};
pub use rng::{derive_seed, WordDraws};
