//! Seeded, splittable random streams.
//!
//! ChaCha is counter-based: a generator is fully determined by its 256-bit
//! key and 64-bit stream nonce, so deriving substreams is pure arithmetic
//! and the draw sequence for a given `(master_seed, stream_id)` is identical
//! on every platform and under any parallel schedule.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Handle to one reproducible random stream.
///
/// `RngStream` is a small value type; the generator itself is created on
/// demand with [`RngStream::rng`]. Two streams with distinct `stream_id`s
/// are statistically independent, so parallel workers derive one substream
/// per work unit instead of sharing a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self { master_seed, stream_id }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derives the `index`-th child stream.
    ///
    /// The derivation mixes `index` into the stream id with splitmix64, so
    /// chains like `root.substream(i).substream(j)` give well-separated ids
    /// without coordinating between workers.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            master_seed: self.master_seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(index)),
        }
    }

    /// Instantiates the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
