#![allow(dead_code)]

use betaskel::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` uniform points in the unit square.
pub fn random_points(n: usize, seed: u64) -> PointSet {
    let mut rng = rng(seed);
    PointSet::from_coords((0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))).unwrap()
}

pub fn edge_subset(small: &[(usize, usize)], big: &[(usize, usize)]) -> bool {
    small.iter().all(|e| big.binary_search(e).is_ok())
}
