//! Seeded random streams.
//!
//! Each logical consumer (a column in the resampling construction, a trial
//! in the conflict simulator) draws from its own ChaCha stream derived from
//! one 64-bit master seed, so reproducibility does not depend on the order
//! in which consumers are visited.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for stream `index` under `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One independent generator per index `0..count`.
#[derive(Debug, Clone)]
pub struct StreamSet {
    streams: Vec<ChaCha8Rng>,
}

impl StreamSet {
    pub fn new(seed: u64, count: usize) -> Self {
        Self {
            streams: (0..count as u64).map(|i| stream(seed, i)).collect(),
        }
    }

    pub fn get(&mut self, index: usize) -> &mut ChaCha8Rng {
        &mut self.streams[index]
    }
}
