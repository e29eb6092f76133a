//! Deterministic random streams derived from one master seed.
//!
//! Every consumer asks for a stream by name (and optionally an index), so
//! adding a new consumer never perturbs the numbers another one sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derives a 64-bit sub-seed from a master seed and a label.
pub fn derive_seed(seed: u64, name: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(name.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest has 32 bytes"))
}

/// The generator for stream `name`, sub-stream `index`.
pub fn stream(seed: u64, name: &str, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, name));
    rng.set_stream(index);
    rng
}
