//! Seeded randomness shared by key generation and instance generation.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded
//! with `seed_from_u64`. Per-trial seeds are derived with [`split_seed`].

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{int, RatMatrix, RatVector};

pub type DetRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derives the seed for `(index, stream)` under `master`:
///
/// ```text
/// split(master, index, stream) =
///     mix64(mix64(master + GOLDEN·(index + 1)) ^ (stream + 1)·GOLDEN)
/// ```
///
/// with wrapping 64-bit arithmetic, `GOLDEN = 0x9E3779B97F4A7C15` and
/// `mix64` the SplitMix64 finalizer.
pub fn split_seed(master: u64, index: u64, stream: u64) -> u64 {
    let base = mix64(master.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))));
    mix64(base ^ stream.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

pub fn int_vector(rng: &mut DetRng, len: usize, lo: i64, hi: i64) -> RatVector {
    (0..len).map(|_| int(rng.gen_range(lo..=hi))).collect()
}

pub fn int_matrix(rng: &mut DetRng, rows: usize, cols: usize, lo: i64, hi: i64) -> RatMatrix {
    let data = (0..rows * cols)
        .map(|_| int(rng.gen_range(lo..=hi)))
        .collect();
    RatMatrix::new(rows, cols, data).expect("rows * cols entries")
}
