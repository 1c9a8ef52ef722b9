//! Shared inputs for the benchmarks.

use barypoly::fixtures::{random_interior_point, random_sphere_polytope};
use barypoly::{Polytope, RationalVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded random polytope with `n` vertices on the unit sphere in `R^dim`, and
/// an interior point of it.
pub fn sphere_case(dim: usize, n: usize, seed: u64) -> (Polytope, RationalVector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = random_sphere_polytope(dim, n, &mut rng);
    let p = random_interior_point(&poly, &mut rng);
    (poly, p)
}
