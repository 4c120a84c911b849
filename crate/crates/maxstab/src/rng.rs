//! Seed and stream plumbing.
//!
//! Every independent unit of work (a replicate, a bootstrap iteration, the
//! subset draw) owns its own ChaCha stream keyed by `(seed, stream id)`, so
//! results do not depend on execution order or thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream id reserved for subset sampling inside a diagnostic run.
pub const SUBSET_STREAM: u64 = 1 << 33;
/// Base stream id for bootstrap iterations; iteration `b` uses `BOOT_STREAM + b`.
pub const BOOT_STREAM: u64 = 1 << 32;

/// RNG for one unit of work under the given seed.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
