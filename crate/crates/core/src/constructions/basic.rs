//! Small building blocks: max, direct selection, Batcher odd-even sort/merge,
//! sequence helpers.

use crate::network::{NetworkBuilder, Wire};

/// Row-major interleaving of columns: first elements of every column, then
/// second elements, and so on. Shorter columns simply run out.
pub fn zip(cols: &[&[Wire]]) -> Vec<Wire> {
    let len = cols.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut out = Vec::with_capacity(cols.iter().map(|c| c.len()).sum());
    for r in 0..len {
        for c in cols {
            if let Some(&w) = c.get(r) {
                out.push(w);
            }
        }
    }
    out
}

/// Elements at 1-based odd positions.
pub fn odd<T: Copy>(s: &[T]) -> Vec<T> {
    s.iter().step_by(2).copied().collect()
}

/// Elements at 1-based even positions.
pub fn even<T: Copy>(s: &[T]) -> Vec<T> {
    s.iter().skip(1).step_by(2).copied().collect()
}

/// n-1 comparators; the maximum ends up first, the displaced values follow.
pub fn max(b: &mut NetworkBuilder, x: &[Wire]) -> Vec<Wire> {
    let Some((&first, rest)) = x.split_first() else {
        return Vec::new();
    };
    let mut cur = first;
    let mut tail = Vec::with_capacity(rest.len());
    for &w in rest {
        let o = b.sort(&[cur, w]);
        cur = o[0];
        tail.push(o[1]);
    }
    let mut out = vec![cur];
    out.extend(tail);
    out
}

/// One truncated selector gate exposing the top `k` of `x`. Positions past
/// `k` are constant false and carry no information.
pub fn direct(b: &mut NetworkBuilder, x: &[Wire], k: usize) -> Vec<Wire> {
    if x.len() > b.max_arity() {
        b.set_max_arity(x.len());
    }
    b.select(x, k)
}

/// Batcher's odd-even merge of two sorted sequences of any lengths.
pub fn batcher_merge(b: &mut NetworkBuilder, x: &[Wire], y: &[Wire]) -> Vec<Wire> {
    if x.is_empty() {
        return y.to_vec();
    }
    if y.is_empty() {
        return x.to_vec();
    }
    if x.len() == 1 && y.len() == 1 {
        return b.sort(&[x[0], y[0]]);
    }
    let v = batcher_merge(b, &odd(x), &odd(y));
    let w = batcher_merge(b, &even(x), &even(y));
    let mut z = zip(&[&v, &w]);
    let pairs = (z.len() - 1) / 2;
    for i in 1..=pairs {
        b.sort_pair(&mut z, 2 * i - 1, 2 * i);
    }
    z
}

/// Batcher's odd-even merge sort.
pub fn batcher_sort(b: &mut NetworkBuilder, x: &[Wire]) -> Vec<Wire> {
    if x.len() <= 1 {
        return x.to_vec();
    }
    let h = x.len().div_ceil(2);
    let l = batcher_sort(b, &x[..h]);
    let r = batcher_sort(b, &x[h..]);
    batcher_merge(b, &l, &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Meta;

    fn sorted_ok(bits: &[bool]) -> bool {
        bits.windows(2).all(|w| w[0] >= w[1])
    }

    #[test]
    fn zip_row_major() {
        let a = [Wire(1), Wire(2), Wire(3)];
        let b = [Wire(4)];
        let c = [Wire(5), Wire(6)];
        assert_eq!(
            zip(&[&a, &b, &c]),
            vec![Wire(1), Wire(4), Wire(5), Wire(2), Wire(6), Wire(3)]
        );
        assert_eq!(odd(&[1, 2, 3, 4, 5]), vec![1, 3, 5]);
        assert_eq!(even(&[1, 2, 3, 4, 5]), vec![2, 4]);
    }

    #[test]
    fn max_is_or() {
        for n in 1..=10 {
            let mut b = NetworkBuilder::new(n);
            let ins = b.inputs();
            let out = max(&mut b, &ins);
            let bp = b.finish(out, Meta::default());
            assert_eq!(bp.gates.len(), n - 1);
            for v in 0u32..(1 << n) {
                let x: Vec<bool> = (0..n).map(|i| v >> i & 1 == 1).collect();
                let y = bp.evaluate(&x).unwrap();
                assert_eq!(y[0], v != 0);
                assert_eq!(y.iter().filter(|&&b| b).count(), v.count_ones() as usize);
            }
        }
    }

    #[test]
    fn batcher_sorts_everything() {
        for n in 1..=10 {
            let mut b = NetworkBuilder::new(n);
            let ins = b.inputs();
            let out = batcher_sort(&mut b, &ins);
            let bp = b.finish(out, Meta::default());
            match n {
                2 => assert_eq!(bp.gates.len(), 1),
                4 => assert_eq!(bp.gates.len(), 5),
                8 => assert_eq!(bp.gates.len(), 19),
                _ => {}
            }
            for v in 0u32..(1 << n) {
                let x: Vec<bool> = (0..n).map(|i| v >> i & 1 == 1).collect();
                assert!(sorted_ok(&bp.evaluate(&x).unwrap()));
            }
        }
    }

    #[test]
    fn batcher_merge_uneven() {
        for la in 0..=5 {
            for lb in 0..=5 {
                let mut b = NetworkBuilder::new(la + lb);
                let ins = b.inputs();
                let out = batcher_merge(&mut b, &ins[..la], &ins[la..]);
                let bp = b.finish(out, Meta::default());
                for ca in 0..=la {
                    for cb in 0..=lb {
                        let mut x = vec![false; la + lb];
                        x[..ca].fill(true);
                        x[la..la + cb].fill(true);
                        assert!(sorted_ok(&bp.evaluate(&x).unwrap()), "{la} {lb} {ca} {cb}");
                    }
                }
            }
        }
    }
}
