//! Counter-based stream derivation.
//!
//! Every random stream in a simulation is keyed by `(master seed, trial id,
//! label)`, so a trial draws the same numbers no matter which worker runs it or
//! in which order trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type StreamRng = ChaCha8Rng;

/// Derives an independent generator for `(master, trial_id, label)`.
pub fn stream(master: u64, trial_id: u64, label: &str) -> StreamRng {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(trial_id.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Short hex digest of an arbitrary description, used to tag reports.
pub fn digest_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}
