//! Admissible input generators for merger contracts.

use crate::constructions::mwise_lengths;
use crate::error::{Error, Result};

/// A tuple of binary columns.
pub type Columns = Vec<Vec<bool>>;

fn sorted_column(len: usize, ones: usize) -> Vec<bool> {
    (0..len).map(|j| j < ones).collect()
}

/// All m-wise tuples of order (c, k): columns of lengths `min(c, k/i)`, each
/// sorted, rows dominated left to right. A sorted column is determined by
/// its count of ones, and domination means counts are non-increasing.
pub fn gen_mwise_tuples(c: usize, k: usize, m: usize) -> Result<Vec<Columns>> {
    if m == 0 || k > m * c {
        return Err(Error::Shape(format!("order ({c},{k}) needs k/m <= c")));
    }
    let lens = mwise_lengths(c, k, m);
    let mut out = Vec::new();
    let mut counts = vec![0usize; m];
    fn rec(i: usize, cap: usize, lens: &[usize], counts: &mut Vec<usize>, out: &mut Vec<Columns>) {
        if i == lens.len() {
            out.push(lens.iter().zip(counts.iter()).map(|(&l, &t)| sorted_column(l, t)).collect());
            return;
        }
        for t in 0..=cap.min(lens[i]) {
            counts[i] = t;
            rec(i + 1, t, lens, counts, out);
        }
    }
    rec(0, usize::MAX, &lens, &mut counts, &mut out);
    Ok(out)
}

/// Independent check of the m-wise conditions on a tuple.
pub fn is_mwise(cols: &[Vec<bool>], c: usize, k: usize) -> bool {
    let m = cols.len();
    let lens = mwise_lengths(c, k, m);
    if cols.iter().map(Vec::len).ne(lens.iter().copied()) {
        return false;
    }
    let sorted = cols.iter().all(|col| col.windows(2).all(|w| w[0] >= w[1]));
    let dominated = (0..m.saturating_sub(1))
        .all(|i| (0..cols[i + 1].len()).all(|j| cols[i][j] >= cols[i + 1][j]));
    sorted && dominated
}

/// Binary columns of length `len` that are top-min(k, len) sorted.
pub fn topk_columns(len: usize, k: usize) -> Vec<Vec<bool>> {
    let t = k.min(len);
    let mut out = Vec::new();
    // prefix contains a zero: everything after it is zero
    for a in 0..t {
        out.push(sorted_column(len, a));
    }
    // prefix all ones: the tail is free
    for tail in 0u64..(1u64 << (len - t)) {
        let mut col = vec![true; t];
        col.extend((0..len - t).map(|j| tail >> j & 1 == 1));
        out.push(col);
    }
    out
}

/// Tuples of four columns with the given lengths, each top-min(k, len)
/// sorted.
pub fn gen_topk_columns_shape(lens: [usize; 4], k: usize) -> Vec<Columns> {
    let per: Vec<Vec<Vec<bool>>> = lens.iter().map(|&l| topk_columns(l, k)).collect();
    let mut out = vec![Vec::new()];
    for choices in &per {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for prefix in &out {
            for col in choices {
                let mut t: Columns = prefix.clone();
                t.push(col.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Every non-increasing length shape (including empty columns) up to
/// `max_len`.
pub fn length_shapes(max_len: usize) -> Vec<[usize; 4]> {
    let mut v = Vec::new();
    for a in 0..=max_len {
        for b in 0..=a {
            for c in 0..=b {
                for d in 0..=c {
                    v.push([a, b, c, d]);
                }
            }
        }
    }
    v
}

/// All tuples of top-k sorted columns with non-increasing lengths up to
/// `max_len`.
pub fn gen_topk_columns(max_len: usize, k: usize) -> Vec<Columns> {
    length_shapes(max_len).into_iter().flat_map(|s| gen_topk_columns_shape(s, k)).collect()
}

/// Number of top-t sorted binary columns of length `len`, t = min(k, len).
pub fn count_topk_columns(len: usize, k: usize) -> u64 {
    let t = k.min(len);
    t as u64 + (1u64 << (len - t))
}

/// Filter-based enumeration used to cross-check the generators: all binary
/// fillings of the given lengths that satisfy `keep`.
pub fn filter_enumerate(lens: &[usize], keep: impl Fn(&[Vec<bool>]) -> bool) -> Vec<Columns> {
    let total: usize = lens.iter().sum();
    assert!(total <= 20, "filter enumeration is for small shapes");
    let mut out = Vec::new();
    for v in 0u64..(1u64 << total) {
        let mut off = 0;
        let cols: Columns = lens
            .iter()
            .map(|&l| {
                let col = (0..l).map(|j| v >> (off + j) & 1 == 1).collect();
                off += l;
                col
            })
            .collect();
        if keep(&cols) {
            out.push(cols);
        }
    }
    out
}
