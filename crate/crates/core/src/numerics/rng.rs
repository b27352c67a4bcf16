//! Counter-keyed random streams.
//!
//! Every random quantity in the crate is a pure function of a 64-bit seed, a
//! stream (job) id and a sample counter, so parallel evaluation never depends
//! on scheduling or on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix `(seed, stream, counter)` into 64 uniformly distributed bits.
#[inline]
pub fn counter_u64(seed: u64, stream: u64, counter: u64) -> u64 {
    let a = splitmix64(seed ^ splitmix64(stream.wrapping_mul(GOLDEN)));
    splitmix64(a ^ counter.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Uniform double in `[0, 1)` keyed by `(seed, stream, counter)`.
#[inline]
pub fn counter_uniform(seed: u64, stream: u64, counter: u64) -> f64 {
    (counter_u64(seed, stream, counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A ChaCha stream for sequential draws inside one job.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
