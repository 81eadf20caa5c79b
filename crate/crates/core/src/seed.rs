//! Counter-based RNG stream derivation.
//!
//! Every random choice in an experiment is drawn from a ChaCha20 stream whose
//! key is `SHA-256(master_seed || label)` and whose stream id is a counter
//! (usually the trial index). A trial's randomness therefore depends only on
//! `(master_seed, label, index)`, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha20Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedTree {
    master: u64,
}

impl SeedTree {
    pub fn new(master: u64) -> Self {
        SeedTree { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// The `index`-th stream under `label`.
    pub fn stream(&self, label: &str, index: u64) -> Rng {
        let mut hasher = Sha256::new();
        hasher.update(self.master.to_le_bytes());
        hasher.update((label.len() as u64).to_le_bytes());
        hasher.update(label.as_bytes());
        let digest = hasher.finalize();
        let mut key = [0u8; 32];
        key.copy_from_slice(&digest);
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }

    /// A child tree, so that nested procedures can derive their own labels.
    pub fn child(&self, label: &str) -> SeedTree {
        use rand::RngCore;
        SeedTree::new(self.stream(label, u64::MAX).next_u64())
    }
}

/// Convenience: a single stream from a bare seed.
pub fn rng_from_seed(seed: u64) -> Rng {
    SeedTree::new(seed).stream("root", 0)
}
