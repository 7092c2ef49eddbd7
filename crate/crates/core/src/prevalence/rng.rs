//! Counter-style randomness keyed by (seed, word), so any draw can be
//! regenerated or frozen without replaying the others.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::symbolic::Word;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed number `index` of `seed`. Distinct indices give distinct seeds.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index)
}

/// Generator for the draws of one seed; each word reads its own stream.
#[derive(Clone, Debug)]
pub struct WordDraws {
    base: ChaCha8Rng,
}

impl WordDraws {
    pub fn new(seed: u64) -> Self {
        WordDraws {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on [−1, 1), a function of (seed, word) only.
    pub fn uniform(&self, w: &Word) -> f64 {
        let mut rng = self.base.clone();
        rng.set_stream(w.heap_index());
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    }
}
