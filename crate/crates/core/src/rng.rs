//! Seed derivation and per-task random streams.
//!
//! Every stochastic routine takes a 64-bit seed. Parallel sub-tasks (restarts,
//! optimizer starts, experiment cells) never share a generator: each one gets
//! its own ChaCha stream keyed by `(seed, index)`, so results do not depend on
//! scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

/// Generator for sub-task `index` of a run seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Stable 64-bit seed derived from a master seed and a list of labels.
///
/// The mapping is a truncated SHA-256 of the little-endian master seed and the
/// labels joined with a separator, so it is identical across platforms and
/// releases.
pub fn derive_seed(master: u64, labels: &[&str]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    for label in labels {
        hasher.update([0x1f]);
        hasher.update(label.as_bytes());
    }
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}
