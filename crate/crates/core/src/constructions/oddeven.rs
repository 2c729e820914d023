//! Four-column odd-even merging.

use super::basic::{even, odd, zip};
use crate::network::{NetworkBuilder, Wire};

/// Number of pair comparators applied by [`oe_combine`] for order `k` over a
/// zipped sequence of length `len`: floor(min(k, len-1) / 2).
pub fn combine_pairs(k: usize, len: usize) -> usize {
    if len == 0 {
        return 0;
    }
    k.min(len - 1) / 2
}

/// Zips `x` and `y` and compares the pairs (z2,z3), (z4,z5), ... that can
/// still affect the top `k` positions.
pub fn oe_combine(b: &mut NetworkBuilder, x: &[Wire], y: &[Wire], k: usize) -> Vec<Wire> {
    let mut z = zip(&[x, y]);
    for i in 1..=combine_pairs(k, z.len()) {
        b.sort_pair(&mut z, 2 * i - 1, 2 * i);
    }
    z
}

/// Merges four top-k sorted columns (non-increasing lengths, possibly empty)
/// into one top-k sorted sequence containing all of their wires.
pub fn four_oe_merge(b: &mut NetworkBuilder, cols: [&[Wire]; 4], k: usize) -> Vec<Wire> {
    let [w, x, y, z] = cols;
    debug_assert!(w.len() >= x.len() && x.len() >= y.len() && y.len() >= z.len());
    if k == 0 {
        return zip(&cols);
    }
    if x.is_empty() {
        return w.to_vec();
    }
    if w.len() == 1 {
        let a = zip(&cols);
        return b.sort(&a);
    }
    let odds = [odd(w), odd(x), odd(y), odd(z)];
    let evens = [even(w), even(x), even(y), even(z)];
    let sa: usize = odds.iter().map(Vec::len).sum();
    let sb: usize = evens.iter().map(Vec::len).sum();
    let a = four_oe_merge(b, [&odds[0], &odds[1], &odds[2], &odds[3]], sa.min(k / 2 + 2));
    let bb = four_oe_merge(b, [&evens[0], &evens[1], &evens[2], &evens[3]], sb.min(k / 2));
    let c = oe_combine(b, &odd(&a), &odd(&bb), k / 2 + 1);
    let d = oe_combine(b, &even(&a), &even(&bb), k / 2);
    oe_combine(b, &c, &d, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Meta;

    #[test]
    fn combine_example() {
        // a = 1111 (top-4 full), b = 1100 (top-2 full), K = 6
        let mut b = NetworkBuilder::new(8);
        let ins = b.inputs();
        let out = oe_combine(&mut b, &ins[..4], &ins[4..], 6);
        let bp = b.finish(out, Meta::default());
        let x = [true, true, true, true, true, true, false, false];
        assert_eq!(bp.evaluate(&x).unwrap(), x.to_vec());
    }

    #[test]
    fn combine_needs_no_gate_when_balanced() {
        let b = NetworkBuilder::new(4);
        let ins = b.inputs();
        let out = zip(&[&ins[..2], &ins[2..]]);
        let bp = b.finish(out, Meta::default());
        // a = 10, b = 10
        assert_eq!(
            bp.evaluate(&[true, false, true, false]).unwrap(),
            vec![true, true, false, false]
        );
    }

    #[test]
    fn merge_16_4_gate_census() {
        // four 4-sorters at the bottom plus ten comparators
        let mut b = NetworkBuilder::new(16);
        let ins = b.inputs();
        let out = four_oe_merge(&mut b, [&ins[..4], &ins[4..8], &ins[8..12], &ins[12..]], 4);
        let bp = b.finish(out, Meta::default());
        let r = bp.count_gates();
        assert_eq!((r.sorters(4), r.sorters(2)), (4, 10));
        assert_eq!(r.variables, 36);
    }

    #[test]
    fn passthrough_when_single_column() {
        let mut b = NetworkBuilder::new(3);
        let ins = b.inputs();
        let out = four_oe_merge(&mut b, [&ins, &[], &[], &[]], 3);
        assert_eq!(out, ins);
        assert_eq!(b.gate_count(), 0);
    }
}
