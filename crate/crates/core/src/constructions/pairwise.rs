//! Parberry-style pairwise merging, used by the pairwise cardinality network.

use super::basic::zip;
use crate::network::{NetworkBuilder, Wire};

/// Merges sorted `a` and sorted `bb` where `a` dominates `bb` position-wise
/// (`a[i] >= bb[i]`, `|bb| <= |a|`). Returns the row-major zip after the
/// correction comparators (b_i, a_{i+d}) for d = P/2, ..., 1.
pub fn pw_merge(b: &mut NetworkBuilder, a: &[Wire], bb: &[Wire]) -> Vec<Wire> {
    let mut a = a.to_vec();
    let mut bb = bb.to_vec();
    debug_assert!(bb.len() <= a.len());
    let mut d = a.len().next_power_of_two() / 2;
    while d >= 1 {
        let top = bb.len().min(a.len().saturating_sub(d));
        for i in 1..=top {
            let o = b.sort(&[bb[i - 1], a[i + d - 1]]);
            bb[i - 1] = o[0];
            a[i + d - 1] = o[1];
        }
        d /= 2;
    }
    zip(&[&a, &bb])
}

/// The splitting step: compares x_i with x_{i+h} where h = ceil(n/2), the
/// larger value staying in the first half.
pub fn pw_split(b: &mut NetworkBuilder, x: &[Wire]) -> Vec<Wire> {
    let mut x = x.to_vec();
    let h = x.len().div_ceil(2);
    for i in 0..x.len() / 2 {
        b.sort_pair(&mut x, i, h + i);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_sizes() {
        for (k, want) in [(2usize, 1usize), (4, 5), (8, 17)] {
            let mut b = NetworkBuilder::new(2 * k);
            let ins = b.inputs();
            pw_merge(&mut b, &ins[..k], &ins[k..]);
            assert_eq!(b.gate_count(), want);
        }
    }

    #[test]
    fn split_size() {
        let mut b = NetworkBuilder::new(16);
        let ins = b.inputs();
        pw_split(&mut b, &ins);
        assert_eq!(b.gate_count(), 8);
    }
}
