//! Closed-form size formulas and arithmetic recurrences that mirror the
//! builders in pure mode.
//!
//! `log` is base 2 throughout. Closed forms are defined for powers of 4 with
//! k <= n/4; elsewhere they are still evaluated but flagged off-grid.

use std::collections::BTreeMap;

use crate::network::CountReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    /// Stated as an exact count.
    Exact,
    /// Derived with floors and ceilings omitted.
    Approximate,
    /// An upper bound.
    UpperBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormulaValue {
    pub name: &'static str,
    pub value: f64,
    pub tag: Tag,
    pub on_grid: bool,
}

fn lg(x: usize) -> f64 {
    (x as f64).log2()
}

fn is_pow4(x: usize) -> bool {
    x.is_power_of_two() && x.trailing_zeros().is_multiple_of(2)
}

/// True when (n, k) lies on the grid the closed forms assume.
pub fn on_grid(n: usize, k: usize) -> bool {
    is_pow4(n) && is_pow4(k) && 4 * k <= n
}

/// The B* recurrence for variables of the four-column odd-even merger.
pub fn b_star(s: usize, k: usize) -> u64 {
    if s <= 4 {
        return 4;
    }
    b_star(s / 2, k / 2 + 2) + b_star(s / 2, k / 2) + 4 * (k / 2) as u64 + 2
}

/// 2-comparator recurrence B(s, k) of the odd-even merger analysis.
pub fn b_rec(s: usize, k: usize) -> u64 {
    if s <= 4 {
        return 0;
    }
    b_rec(s / 2, k / 2 + 2) + b_rec(s / 2, k / 2) + k as u64 + 1
}

/// The f(n) recurrence: 58 at n = 16, 4 f(n/4) + 42 above.
pub fn f_4oe_k4(n: usize) -> u64 {
    if n <= 16 {
        58
    } else {
        4 * f_4oe_k4(n / 4) + 42
    }
}

/// Evaluates every closed form at (n, k).
pub fn theoretical_counts(n: usize, k: usize) -> Vec<FormulaValue> {
    let (nf, kf) = (n as f64, k as f64);
    let (ln, lk) = (lg(n), lg(k));
    let grid = on_grid(n, k);
    let s = 4 * k;
    let v = |name, value, tag| FormulaValue { name, value, tag, on_grid: grid };
    vec![
        v("2oe_sel.comparators", nf * lk * lk / 4.0 + 0.75 * nf * lk - kf * lk, Tag::Exact),
        v("2oe_merge.comparators", kf * lk + 1.0, Tag::Exact),
        v("2oe_merge.vars_x3", 6.0 * kf * lk + 6.0, Tag::Exact),
        v("2oe_merge.clauses_x3", 9.0 * kf * lk + 9.0, Tag::Exact),
        v("pw_split.comparators", nf / 2.0, Tag::Exact),
        v("pw_merge.comparators", kf * lk - kf + 1.0, Tag::Exact),
        v("pcn_merges.vars", 5.0 * kf * lk - 6.0 * kf + 6.0, Tag::Exact),
        v("pcn_merges.clauses", 7.5 * kf * lk - 9.0 * kf + 9.0, Tag::Exact),
        v("4w_merge.vars", kf * lk + 7.0 / 6.0 * kf - 5.0, Tag::Approximate),
        v("4w_merge.clauses", 3.75 * kf * lk - 33.0 / 24.0 * kf - 10.0, Tag::Approximate),
        v("4w_merge.table.sort2", 13.0 * kf / 12.0 - 1.0, Tag::Approximate),
        v("4w_merge.table.sort3", kf / 2.0 - 1.0, Tag::Approximate),
        v("4w_merge.table.sort4", kf * lk / 4.0 - 13.0 * kf / 24.0, Tag::Approximate),
        v("4oe_merge.vars_bound", 2.0 * kf * lk + 16.0 * kf - 4.0 * lk - 6.0, Tag::UpperBound),
        v("4oe_merge.clauses_bound", 3.0 * kf * lk + 33.0 * kf - 6.0 * lk - 9.0, Tag::UpperBound),
        v(
            "4oe_merge.sort2_bound",
            kf * lg(s / 2) - kf - 2.0 * lg(s) + 1.5 * s as f64 + 1.0,
            Tag::UpperBound,
        ),
        v("4oe_merge.b_rec", b_rec(s, k) as f64, Tag::Exact),
        v("4oe_merge.b_star", b_star(s, k) as f64, Tag::Exact),
        v("4oe_sel.k4.vars", 4.5 * nf - 14.0, Tag::Exact),
        v("2oe_sel.k4.vars", 5.0 * nf - 16.0, Tag::Exact),
        v("log_n", ln, Tag::Exact),
    ]
}

pub fn lookup(values: &[FormulaValue], name: &str) -> Option<f64> {
    values.iter().find(|v| v.name == name).map(|v| v.value)
}

/// Sorter tallies by arity, produced by the mirrors below.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally(pub BTreeMap<usize, u64>);

impl Tally {
    fn add(&mut self, arity: usize, count: u64) {
        if arity >= 2 && count > 0 {
            *self.0.entry(arity).or_default() += count;
        }
    }

    pub fn comparators(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn variables(&self) -> u64 {
        self.0.iter().map(|(&a, &c)| a as u64 * c).sum()
    }

    pub fn clauses(&self) -> u64 {
        self.0.iter().map(|(&a, &c)| ((1u64 << a) - 1) * c).sum()
    }

    /// Same tallies as a gate census of full sorters.
    pub fn matches(&self, r: &CountReport) -> bool {
        let mine: BTreeMap<(usize, usize), usize> =
            self.0.iter().map(|(&a, &c)| ((a, a), c as usize)).collect();
        mine == r.by_shape
    }
}

/// Comparators of Batcher's merge of sorted sequences of lengths a and b.
pub fn batcher_merge_count(a: usize, b: usize) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    if a == 1 && b == 1 {
        return 1;
    }
    let v = a.div_ceil(2) + b.div_ceil(2);
    let w = a / 2 + b / 2;
    batcher_merge_count(a.div_ceil(2), b.div_ceil(2))
        + batcher_merge_count(a / 2, b / 2)
        + ((v + w - 1) / 2) as u64
}

pub fn batcher_sort_count(n: usize) -> u64 {
    if n <= 1 {
        return 0;
    }
    let h = n.div_ceil(2);
    batcher_sort_count(h) + batcher_sort_count(n - h) + batcher_merge_count(h, n - h)
}

/// Comparators of the pairwise merge of lengths a >= b.
pub fn pw_merge_count(a: usize, b: usize) -> u64 {
    let mut total = 0;
    let mut d = a.next_power_of_two() / 2;
    while d >= 1 {
        total += b.min(a.saturating_sub(d)) as u64;
        d /= 2;
    }
    total
}

/// Comparator recursion of the two-column odd-even selection network.
pub fn rec_2oe_comparators(n: usize, k: usize) -> u64 {
    if k == 0 || n <= 1 {
        return 0;
    }
    if k == 1 {
        return n as u64 - 1;
    }
    if k == n {
        return batcher_sort_count(n);
    }
    let (n1, n2) = (n.div_ceil(2), n / 2);
    let (k1, k2) = (k.min(n1), k.min(n2));
    rec_2oe_comparators(n1, k1) + rec_2oe_comparators(n2, k2) + batcher_merge_count(k1, k2)
}

/// Comparator recursion of the pairwise cardinality network.
pub fn rec_pcn_comparators(n: usize, k: usize) -> u64 {
    if k == 0 || n <= 1 {
        return 0;
    }
    if k == 1 {
        return n as u64 - 1;
    }
    if k == n {
        return batcher_sort_count(n);
    }
    let h = n.div_ceil(2);
    let (ka, kb) = (k.min(h), (k / 2).min(n - h));
    (n / 2) as u64 + rec_pcn_comparators(h, ka) + rec_pcn_comparators(n - h, kb) + pw_merge_count(ka, kb)
}

fn balanced(n: usize, m: usize) -> Vec<usize> {
    (0..m).map(|i| n / m + usize::from(i < n % m)).filter(|&s| s > 0).collect()
}

/// Four-column odd-even merger tally over column lengths.
pub fn mirror_4oe_merge(lens: [usize; 4], k: usize, t: &mut Tally) {
    let [k1, k2, _, _] = lens;
    if k == 0 || k2 == 0 {
        return;
    }
    let s: usize = lens.iter().sum();
    if k1 == 1 {
        t.add(s, 1);
        return;
    }
    let odd = lens.map(|l| l.div_ceil(2));
    let even = lens.map(|l| l / 2);
    let (sa, sb) = (odd.iter().sum::<usize>(), even.iter().sum::<usize>());
    mirror_4oe_merge(odd, sa.min(k / 2 + 2), t);
    mirror_4oe_merge(even, sb.min(k / 2), t);
    let pairs = |order: usize, len: usize| if len == 0 { 0 } else { order.min(len - 1) / 2 };
    let (ao, ae) = (sa.div_ceil(2), sa / 2);
    let (bo, be) = (sb.div_ceil(2), sb / 2);
    t.add(2, pairs(k / 2 + 1, ao + bo) as u64);
    t.add(2, pairs(k / 2, ae + be) as u64);
    t.add(2, pairs(k, s) as u64);
}

/// Four-column odd-even selection in pure mode.
pub fn mirror_4oe_sel(n: usize, k: usize, t: &mut Tally) {
    if k == 0 || n <= 1 {
        return;
    }
    if k == 1 {
        t.add(2, n as u64 - 1);
        return;
    }
    if n <= 4 {
        t.add(n, 1);
        return;
    }
    let sizes = balanced(n, 4);
    let mut lens = [0usize; 4];
    for (i, &ni) in sizes.iter().enumerate() {
        lens[i] = k.min(ni);
        mirror_4oe_sel(ni, lens[i], t);
    }
    mirror_4oe_merge(lens, k, t);
}

/// Tallies one sort over slots of which `real` carry values; padding sinks.
fn sym_sort(slots: &mut [&mut bool], t: &mut Tally) {
    let real = slots.iter().filter(|b| ***b).count();
    t.add(real, 1);
    for (i, s) in slots.iter_mut().enumerate() {
        **s = i < real;
    }
}

/// Four-wise merger tally; `cols[i][j]` is false on padding.
pub fn mirror_4w_merge(cols: &mut [Vec<bool>; 4], k: usize, t: &mut Tally) {
    let [w, x, y, z] = cols;
    let (k1, k2, k3, k4) = (w.len(), x.len(), y.len(), z.len());
    let sub = |a: usize, b: usize| a.saturating_sub(b);
    let mut h = k1.next_power_of_two();
    while h > 1 {
        h /= 2;
        for j in 1..=sub(k3, h).min(k4) {
            if j + 3 * h <= k1 && j + 2 * h <= k2 {
                sym_sort(&mut [&mut z[j - 1], &mut y[j + h - 1], &mut x[j + 2 * h - 1], &mut w[j + 3 * h - 1]], t);
            } else if j + 2 * h <= k2 {
                sym_sort(&mut [&mut z[j - 1], &mut y[j + h - 1], &mut x[j + 2 * h - 1]], t);
            } else {
                sym_sort(&mut [&mut z[j - 1], &mut y[j + h - 1]], t);
            }
        }
        for j in 1..=sub(k2, h).min(k3).min(h) {
            if j + 2 * h <= k1 {
                sym_sort(&mut [&mut y[j - 1], &mut x[j + h - 1], &mut w[j + 2 * h - 1]], t);
            } else {
                sym_sort(&mut [&mut y[j - 1], &mut x[j + h - 1]], t);
            }
        }
        for j in 1..=sub(k1, h).min(k2).min(h) {
            sym_sort(&mut [&mut x[j - 1], &mut w[j + h - 1]], t);
        }
    }
    for j in 1..=sub(k1, 2).min(k4) {
        sym_sort(&mut [&mut z[j - 1], &mut w[j + 1]], t);
    }
    for j in 1..=sub(k2, 1).min(k4) {
        sym_sort(&mut [&mut y[j - 1], &mut z[j - 1], &mut w[j], &mut x[j]], t);
    }
    if k1 > k4 && k2 == k4 && k4 >= 1 {
        sym_sort(&mut [&mut y[k4 - 1], &mut z[k4 - 1], &mut w[k4]], t);
    }
    if k % 4 == 3 && k1 > k3 {
        sym_sort(&mut [&mut y[k4], &mut w[k4 + 1]], t);
    }
}

/// Four-wise selection in pure mode.
pub fn mirror_4w_sel(n: usize, k: usize, t: &mut Tally) {
    if k == 0 || n <= 1 {
        return;
    }
    if k == 1 {
        t.add(2, n as u64 - 1);
        return;
    }
    if n <= 4 {
        t.add(n, 1);
        return;
    }
    let sizes = balanced(n, 4);
    let n1 = sizes[0];
    for r in 0..n1 {
        t.add(sizes.iter().filter(|&&s| s > r).count(), 1);
    }
    let mut cols: [Vec<bool>; 4] = Default::default();
    for (i, &ni) in sizes.iter().enumerate() {
        let li = ni.min(k / (i + 1));
        let ki = n1.min(k / (i + 1));
        mirror_4w_sel(ni, li, t);
        cols[i] = (0..ki).map(|j| j < li).collect();
    }
    mirror_4w_merge(&mut cols, k, t);
}

/// Tally for the given method in pure mode.
pub fn mirror(method: crate::constructions::Method, n: usize, k: usize) -> Option<Tally> {
    use crate::constructions::Method;
    let mut t = Tally::default();
    match method {
        Method::FourOddEven => mirror_4oe_sel(n, k, &mut t),
        Method::FourWise => mirror_4w_sel(n, k, &mut t),
        Method::TwoOddEven => t.add(2, rec_2oe_comparators(n, k)),
        Method::Pairwise => t.add(2, rec_pcn_comparators(n, k)),
        Method::Direct | Method::Naive => return None,
    }
    Some(t)
}
