//! The four-wise merger: slope sorts with halving distance, then two
//! correction stages.

use std::ops::Range;

use super::basic::zip;
use crate::network::{NetworkBuilder, Wire};

/// Gate index ranges of each stage, for per-stage accounting.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeTrace {
    pub iterations: Vec<Range<usize>>,
    pub corrections: Range<usize>,
}

fn span(a: usize, b: usize) -> usize {
    a.saturating_sub(b)
}

/// Merges a 4-wise tuple of order (c, k) given as padded columns
/// `w, x, y, z` with lengths `min(c, k/i)`. Returns the row-major result and
/// the stage trace.
pub fn four_wise_merge(
    b: &mut NetworkBuilder,
    cols: [Vec<Wire>; 4],
    k: usize,
) -> (Vec<Wire>, MergeTrace) {
    let [mut w, mut x, mut y, mut z] = cols;
    let (k1, k2, k3, k4) = (w.len(), x.len(), y.len(), z.len());
    let mut trace = MergeTrace::default();

    // 1-based indexing below mirrors the usual statement of the merger
    let mut h = k1.next_power_of_two();
    while h > 1 {
        h /= 2;
        let start = b.gate_count();
        for j in 1..=span(k3, h).min(k4) {
            if j + 3 * h <= k1 && j + 2 * h <= k2 {
                b.sort_slots(&mut [
                    &mut z[j - 1],
                    &mut y[j + h - 1],
                    &mut x[j + 2 * h - 1],
                    &mut w[j + 3 * h - 1],
                ]);
            } else if j + 2 * h <= k2 {
                b.sort_slots(&mut [&mut z[j - 1], &mut y[j + h - 1], &mut x[j + 2 * h - 1]]);
            } else {
                b.sort_slots(&mut [&mut z[j - 1], &mut y[j + h - 1]]);
            }
        }
        for j in 1..=span(k2, h).min(k3).min(h) {
            if j + 2 * h <= k1 {
                b.sort_slots(&mut [&mut y[j - 1], &mut x[j + h - 1], &mut w[j + 2 * h - 1]]);
            } else {
                b.sort_slots(&mut [&mut y[j - 1], &mut x[j + h - 1]]);
            }
        }
        for j in 1..=span(k1, h).min(k2).min(h) {
            b.sort_slots(&mut [&mut x[j - 1], &mut w[j + h - 1]]);
        }
        trace.iterations.push(start..b.gate_count());
    }

    let start = b.gate_count();
    for j in 1..=span(k1, 2).min(k4) {
        b.sort_slots(&mut [&mut z[j - 1], &mut w[j + 1]]);
    }
    for j in 1..=span(k2, 1).min(k4) {
        b.sort_slots(&mut [&mut y[j - 1], &mut z[j - 1], &mut w[j], &mut x[j]]);
    }
    if k1 > k4 && k2 == k4 && k4 >= 1 {
        b.sort_slots(&mut [&mut y[k4 - 1], &mut z[k4 - 1], &mut w[k4]]);
    }
    if k % 4 == 3 && k1 > k3 {
        debug_assert!(k3 > k4 && k1 > k4 + 1, "k={k} lens={k1},{k2},{k3},{k4}");
        b.sort_slots(&mut [&mut y[k4], &mut w[k4 + 1]]);
    }
    trace.corrections = start..b.gate_count();

    (zip(&[&w, &x, &y, &z]), trace)
}

/// Column lengths of a 4-wise tuple of order (c, k).
pub fn mwise_lengths(c: usize, k: usize, m: usize) -> Vec<usize> {
    (1..=m).map(|i| c.min(k / i)).collect()
}
