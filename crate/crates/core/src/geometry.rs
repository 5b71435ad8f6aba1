//! Planar points and the unit-disk adjacency rule, generic over the
//! coordinate scalar.
//!
//! The rule `dx² + dy² ≤ r²` is evaluated without square roots, so it is
//! exact for integer and rational scalars. Floating-point scalars are
//! accepted for convenience but inherit the usual rounding at the boundary.

use num_traits::Num;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
}

impl<S: Num + Clone> Point<S> {
    pub fn distance_squared(&self, other: &Self) -> S {
        let dx = self.x.clone() - other.x.clone();
        let dy = self.y.clone() - other.y.clone();
        dx.clone() * dx + dy.clone() * dy
    }
}

/// Whether `a` and `b` lie within Euclidean distance `radius` of each other.
pub fn within_radius<S: Num + PartialOrd + Clone>(a: &Point<S>, b: &Point<S>, radius: &S) -> bool {
    a.distance_squared(b) <= radius.clone() * radius.clone()
}

/// All pairs `(i, j)`, `i < j`, at distance at most `radius`, in lexicographic order.
pub fn unit_disk_edges<S: Num + PartialOrd + Clone>(points: &[Point<S>], radius: &S) -> Vec<(usize, usize)> {
    let r2 = radius.clone() * radius.clone();
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].distance_squared(&points[j]) <= r2 {
                edges.push((i, j));
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn boundary_distance_is_inclusive_for_rationals() {
        let a = Point::new(q(0, 1), q(0, 1));
        let b = Point::new(q(3, 10), q(4, 10));
        assert!(within_radius(&a, &b, &q(1, 2)));
        assert!(!within_radius(&a, &b, &q(49, 100)));
    }

    #[test]
    fn float_and_integer_scalars_share_the_rule() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(3.0, 0.0)];
        assert_eq!(unit_disk_edges(&pts, &1.0), vec![(0, 1)]);
        let ipts = [Point::new(0i64, 0), Point::new(3, 4), Point::new(6, 8)];
        assert_eq!(unit_disk_edges(&ipts, &5), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn zero_radius_on_distinct_points_has_no_edges() {
        let pts = [Point::new(q(1, 3), q(0, 1)), Point::new(q(2, 3), q(0, 1))];
        assert!(unit_disk_edges(&pts, &q(0, 1)).is_empty());
    }
}
