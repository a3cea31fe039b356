//! Reproducible random substreams.
//!
//! Every random quantity (a bump offset, a bond coupling, one Monte Carlo
//! sample) is drawn from its own ChaCha8 stream addressed by
//! `(seed, purpose tag, index)`. ChaCha is counter based, so a substream
//! is fully determined by its key and independent of how many other
//! substreams were consumed before it, or on which thread.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Root of a family of keyed substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Streams {
    key: u64,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Streams { key: splitmix64(seed ^ 0x5EED_0F_DA7A) }
    }

    /// The substream `index` of the family tagged `purpose`.
    pub fn stream(&self, purpose: &str, index: u64) -> StreamRng {
        let base = splitmix64(self.key ^ fnv1a(purpose.as_bytes()));
        let mut seed = [0u8; 32];
        let mut state = base;
        for chunk in seed.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(index);
        rng
    }

    /// A derived family, e.g. one per disorder realization, whose
    /// substreams are independent of the parent's.
    pub fn child(&self, purpose: &str, index: u64) -> Streams {
        Streams {
            key: splitmix64(splitmix64(self.key ^ fnv1a(purpose.as_bytes())) ^ splitmix64(index)),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// Fixed hash so tags map to the same keys on every platform and toolchain.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}
