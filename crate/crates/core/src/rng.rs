//! Deterministic random streams.
//!
//! Every stream is a ChaCha8 generator keyed by `seed` (expanded with the
//! PCG32 step of `SeedableRng::seed_from_u64`) and positioned on the ChaCha
//! stream `stream_id`. Both pieces are fixed algorithms, so draws do not
//! depend on platform or thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Name recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha8 (seed_from_u64, stream = stream_id)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }

    /// Same seed, different stream. Repetition `r` of an experiment uses
    /// `with_stream(r)`.
    pub fn with_stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
