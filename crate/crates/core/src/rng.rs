//! Counter-based RNG streams: one independent stream per sample index.
//!
//! The stream for sample `j` depends only on `(seed, j)`, so samples can be
//! drawn in any order, on any number of workers, with bit-identical results.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Per-sample random stream.
pub type SampleStream = ChaCha8Rng;

/// Stream for sample `index` under master `seed`.
pub fn sample_stream(seed: u64, index: u64) -> SampleStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One draw from the closed interval `[lo, hi]`; `lo == hi` returns the constant.
pub fn uniform_closed(rng: &mut SampleStream, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}
