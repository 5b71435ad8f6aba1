//! Seeded random instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Instance};
use crate::{Rational, RationalPoint, Weight};

/// Coordinates are multiples of `1 / COORD_DENOMINATOR` in `[0, 1]`.
pub const COORD_DENOMINATOR: i128 = 1_000_000;

/// Inclusive integer weight range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightRange {
    lo: Weight,
    hi: Weight,
}

impl WeightRange {
    pub fn new(lo: Weight, hi: Weight) -> Result<Self> {
        if lo > hi {
            return Err(Error::param(format!("empty weight range {lo}..={hi}")));
        }
        Ok(WeightRange { lo, hi })
    }

    pub fn unit() -> Self {
        WeightRange { lo: 1, hi: 1 }
    }

    fn sample(&self, rng: &mut impl Rng) -> Weight {
        rng.gen_range(self.lo..=self.hi)
    }
}

/// `n` distinct uniform points on the grid over the unit square, joined
/// when within `radius`.
pub fn gen_unit_disk(n: usize, radius: Rational, weights: WeightRange, k: usize, m: usize, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::param("need at least one node"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<RationalPoint> = Vec::with_capacity(n);
    while points.len() < n {
        let p = RationalPoint::new(
            Rational::new(rng.gen_range(0..=COORD_DENOMINATOR), COORD_DENOMINATOR),
            Rational::new(rng.gen_range(0..=COORD_DENOMINATOR), COORD_DENOMINATOR),
        );
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let w = (0..n).map(|_| weights.sample(&mut rng)).collect();
    Instance::unit_disk(points, radius, w, k, m)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gen_gnp(n: usize, p: f64, weights: WeightRange, k: usize, m: usize, seed: u64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::param("need at least one node"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let w = (0..n).map(|_| weights.sample(&mut rng)).collect();
    Instance::new(Graph::from_edges(n, edges)?, w, k, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_disk_is_deterministic() {
        let a = gen_unit_disk(10, Rational::new(2, 5), WeightRange::new(1, 5).unwrap(), 1, 1, 7).unwrap();
        let b = gen_unit_disk(10, Rational::new(2, 5), WeightRange::new(1, 5).unwrap(), 1, 1, 7).unwrap();
        assert_eq!(a, b);
        let c = gen_unit_disk(10, Rational::new(2, 5), WeightRange::new(1, 5).unwrap(), 1, 1, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unit_disk_radius_extremes() {
        let full = gen_unit_disk(12, Rational::from_integer(2), WeightRange::unit(), 1, 1, 3).unwrap();
        assert_eq!(full.graph().edge_count(), 66);
        let none = gen_unit_disk(12, Rational::from_integer(0), WeightRange::unit(), 1, 1, 3).unwrap();
        assert_eq!(none.graph().edge_count(), 0);
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        assert_eq!(gen_gnp(9, 1.0, WeightRange::unit(), 1, 1, 1).unwrap().graph().edge_count(), 36);
        assert_eq!(gen_gnp(9, 0.0, WeightRange::unit(), 1, 1, 1).unwrap().graph().edge_count(), 0);
        let a = gen_gnp(15, 0.4, WeightRange::new(0, 9).unwrap(), 2, 3, 11).unwrap();
        assert_eq!(a, gen_gnp(15, 0.4, WeightRange::new(0, 9).unwrap(), 2, 3, 11).unwrap());
        assert!(gen_gnp(5, 1.5, WeightRange::unit(), 1, 1, 1).is_err());
        assert!(WeightRange::new(3, 2).is_err());
    }
}
