//! Seeded point samples. Point `i` always comes from stream `i` of a ChaCha8
//! generator keyed by the seed, so samples do not depend on thread count.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Point `index` of the annulus `r_min ≤ |z| ≤ r_max` in `ℝ^{real_dim}`:
/// log-uniform radius, uniform direction.
pub fn sample_point(real_dim: usize, r_min: f64, r_max: f64, seed: u64, index: u64) -> DVector<f64> {
  let mut rng = ChaCha8Rng::seed_from_u64(seed);
  rng.set_stream(index);
  let radius = rng.random_range(r_min.ln()..=r_max.ln()).exp();
  loop {
    let dir = DVector::from_fn(real_dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let norm = dir.norm();
    if norm > 1e-12 {
      return dir * (radius / norm);
    }
  }
}

pub fn annulus_points(real_dim: usize, count: usize, r_min: f64, r_max: f64, seed: u64) -> Vec<DVector<f64>> {
  (0..count as u64).into_par_iter().map(|i| sample_point(real_dim, r_min, r_max, seed, i)).collect()
}

/// Annulus points whose complex coordinates all have modulus at least
/// `min_fraction · |z|`. Finite differences at fixed step are only accurate
/// away from the coordinate hyperplanes, where `|z_i|^{β_i}` can lose
/// smoothness. The fraction is capped at `0.8/√n` so acceptance stays likely.
pub fn generic_points(real_dim: usize, count: usize, r_min: f64, r_max: f64, min_fraction: f64, seed: u64) -> Vec<DVector<f64>> {
  let min_fraction = min_fraction.min(0.8 / ((real_dim / 2).max(1) as f64).sqrt());
  let mut out = Vec::with_capacity(count);
  let mut index = 0u64;
  while out.len() < count {
    let z = sample_point(real_dim, r_min, r_max, seed, index);
    index += 1;
    let norm = z.norm();
    if (0..real_dim / 2).all(|j| z[2 * j].hypot(z[2 * j + 1]) >= min_fraction * norm) {
      out.push(z);
    }
  }
  out
}
