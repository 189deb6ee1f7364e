//! Reproducible random streams.
//!
//! Every sample draws from its own ChaCha stream selected by
//! `(seed, sample_index)`, so results do not depend on how samples are
//! scheduled across threads. Vertex `i` always receives the `i`-th uniform of
//! its sample's stream, which couples configurations at different `p`
//! monotonically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn stream(seed: u64, sample_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample_index);
    rng
}

/// `n` uniforms in `[0, 1)` for one sample.
pub fn uniforms(seed: u64, sample_index: u64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, sample_index);
    (0..n).map(|_| rng.gen::<f64>()).collect()
}
