//! Seeded random sources and point-set samplers.
//!
//! All randomized routines take an explicit u64 seed and derive
//! independent substreams, so every run is reproducible bit for bit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream `stream` of the generator for `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `count` points uniform in the box [-extent, extent]^dim.
pub fn uniform_box(r: &mut ChaCha8Rng, dim: usize, extent: f64, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| r.gen_range(-extent..=extent)).collect())
        .collect()
}

/// Copy of `points` with every coordinate perturbed by a relative amount
/// up to `rel` of `scale`.
pub fn jitter(points: &[Vec<f64>], scale: f64, rel: f64, r: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            p.iter()
                .map(|&x| x + scale * r.gen_range(-rel..=rel))
                .collect()
        })
        .collect()
}
