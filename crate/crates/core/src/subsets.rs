//! Subset enumeration in nondecreasing weight order with lexicographic ties.

use std::cmp::Ordering;

use crate::Weight;

/// Compares two subsets (as bitmasks over an ordered ground set) by their
/// sorted member lists, lexicographically; a proper prefix sorts first.
pub fn lex_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let i = diff.trailing_zeros();
    let above = |x: u64| if i >= 63 { 0 } else { x >> (i + 1) };
    if a >> i & 1 == 1 {
        // a holds element i where b holds something larger, or b has ended
        if above(b) != 0 { Ordering::Less } else { Ordering::Greater }
    } else if above(a) != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

pub fn mask_weight(mask: u64, weights: &[Weight]) -> Weight {
    weights
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &w)| w)
        .sum()
}

/// Every subset of `0..weights.len()` ordered by (total weight, lex order).
pub fn by_weight(weights: &[Weight]) -> Vec<u64> {
    let n = weights.len();
    assert!(n < 32, "subset enumeration over {n} items");
    let mut keyed: Vec<(Weight, u64)> = (0..1u64 << n).map(|mask| (mask_weight(mask, weights), mask)).collect();
    keyed.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| lex_cmp(x.1, y.1)));
    keyed.into_iter().map(|(_, mask)| mask).collect()
}
