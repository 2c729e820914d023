//! Builders for selection networks and their mergers.
//!
//! Every selection builder returns a wire list as long as its input whose
//! first `k` entries are the `k` largest inputs in non-increasing order.

pub mod basic;
pub mod fourwise;
pub mod oddeven;
pub mod pairwise;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::{Blueprint, Meta, NetworkBuilder, Wire};

pub use fourwise::{mwise_lengths, MergeTrace};

pub const DEFAULT_DIRECT_THRESHOLD: usize = 8;
pub const DEFAULT_DIRECT_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    FourOddEven,
    FourWise,
    TwoOddEven,
    Pairwise,
    Direct,
    Naive,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::FourOddEven,
        Method::FourWise,
        Method::TwoOddEven,
        Method::Pairwise,
        Method::Direct,
        Method::Naive,
    ];

    pub const NETWORKS: [Method; 4] =
        [Method::FourOddEven, Method::FourWise, Method::TwoOddEven, Method::Pairwise];

    pub fn name(self) -> &'static str {
        match self {
            Method::FourOddEven => "4oe",
            Method::FourWise => "4wise",
            Method::TwoOddEven => "2oe",
            Method::Pairwise => "pcn",
            Method::Direct => "direct",
            Method::Naive => "naive",
        }
    }

    /// Column count of the recursive construction (1 for the flat ones).
    pub fn columns(self) -> usize {
        match self {
            Method::FourOddEven | Method::FourWise => 4,
            Method::TwoOddEven | Method::Pairwise => 2,
            Method::Direct | Method::Naive => 1,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// How recursion bottoms out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseCase {
    /// No substitution: recursion runs down to max and the trivial cases.
    Raw,
    /// Counting mode. Four-column methods sort inputs of size <= 4 with a
    /// single sorter; two-column methods use only their own base cases.
    Pure,
    /// Inputs of size <= threshold use one truncated selector gate.
    Direct(usize),
}

impl fmt::Display for BaseCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseCase::Raw => f.write_str("raw"),
            BaseCase::Pure => f.write_str("pure"),
            BaseCase::Direct(t) => write!(f, "direct<={t}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectParams {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub base: BaseCase,
    /// Largest input the `direct` method accepts.
    pub direct_limit: usize,
}

impl SelectParams {
    pub fn new(method: Method, n: usize, k: usize) -> Self {
        SelectParams {
            n,
            k,
            method,
            base: BaseCase::Direct(DEFAULT_DIRECT_THRESHOLD),
            direct_limit: DEFAULT_DIRECT_LIMIT,
        }
    }

    pub fn with_base(mut self, base: BaseCase) -> Self {
        self.base = base;
        self
    }

    pub fn check(&self) -> Result<()> {
        if self.k < 1 || self.k > self.n {
            return Err(Error::Shape(format!("need 1 <= k <= n, got n={} k={}", self.n, self.k)));
        }
        if let BaseCase::Direct(t) = self.base {
            let m = self.method.columns();
            if t < m {
                return Err(Error::Config(format!("direct threshold {t} is below column count {m}")));
            }
        }
        match self.method {
            Method::Naive => Err(Error::Config("naive encoding has no network".into())),
            Method::Direct if self.n > self.direct_limit => Err(Error::Config(format!(
                "direct selection refused for n={} above limit {}",
                self.n, self.direct_limit
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSplit {
    pub sizes: Vec<usize>,
}

impl ColumnSplit {
    pub fn custom(sizes: Vec<usize>) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Shape("column sizes must be positive".into()));
        }
        if sizes.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Shape(format!("column sizes {sizes:?} must be non-increasing")));
        }
        if sizes[0] >= n {
            return Err(Error::Shape("first column must be shorter than the input".into()));
        }
        Ok(ColumnSplit { sizes })
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut off = 0;
        self.sizes
            .iter()
            .map(|&s| {
                off += s;
                off - s..off
            })
            .collect()
    }
}

/// Balanced split: the first `n mod m` columns get one extra element.
pub fn split_columns(n: usize, m: usize) -> Result<ColumnSplit> {
    if n < 2 {
        return Err(Error::Degenerate(format!("cannot split {n} inputs into columns")));
    }
    if m < 2 {
        return Err(Error::Config(format!("column count {m} below 2")));
    }
    let sizes = (0..m)
        .map(|i| n / m + usize::from(i < n % m))
        .filter(|&s| s > 0)
        .collect();
    Ok(ColumnSplit { sizes })
}

struct Sel<'a> {
    b: &'a mut NetworkBuilder,
    base: BaseCase,
    four_col: bool,
}

impl Sel<'_> {
    fn base_case(&mut self, x: &[Wire], k: usize) -> Option<Vec<Wire>> {
        match self.base {
            BaseCase::Raw => None,
            BaseCase::Pure if self.four_col && x.len() <= 4 => Some(self.b.sort(x)),
            BaseCase::Pure => None,
            BaseCase::Direct(t) if x.len() <= t => Some(basic::direct(self.b, x, k)),
            BaseCase::Direct(_) => None,
        }
    }

    fn mw(&mut self, x: &[Wire], k: usize, m: usize, split: Option<&ColumnSplit>) -> Vec<Wire> {
        let n = x.len();
        if k == 0 || n <= 1 {
            return x.to_vec();
        }
        if k == 1 {
            return basic::max(self.b, x);
        }
        if split.is_none() {
            if let Some(out) = self.base_case(x, k) {
                return out;
            }
        }
        let split = match split {
            Some(s) => s.clone(),
            None => split_columns(n, m).expect("n >= 2"),
        };
        let mut cols: Vec<Vec<Wire>> = split.ranges().into_iter().map(|r| x[r].to_vec()).collect();
        let n1 = split.sizes[0];
        for r in 0..n1 {
            let mut slots: Vec<&mut Wire> =
                cols.iter_mut().take_while(|c| c.len() > r).map(|c| &mut c[r]).collect();
            if slots.len() > 1 {
                self.b.sort_slots(&mut slots);
            }
        }
        let mut padded = Vec::with_capacity(m);
        let mut out = Vec::new();
        for (i, col) in cols.iter().enumerate() {
            let li = col.len().min(k / (i + 1));
            let ki = n1.min(k / (i + 1));
            let zi = self.mw(col, li, m, None);
            let mut p = zi[..li].to_vec();
            out.extend_from_slice(&zi[li..]);
            let bot = self.b.bottom();
            p.resize(ki, bot);
            padded.push(p);
        }
        padded.resize(m, Vec::new());
        let merged = match m {
            4 => {
                let cols: [Vec<Wire>; 4] = padded.try_into().expect("four columns");
                fourwise::four_wise_merge(self.b, cols, k).0
            }
            2 => pairwise::pw_merge(self.b, &padded[0], &padded[1]),
            _ => unreachable!("checked by caller"),
        };
        let mut res: Vec<Wire> = merged.into_iter().filter(|&w| !self.b.is_bottom(w)).collect();
        res.extend(out);
        res
    }

    fn oe(&mut self, x: &[Wire], k: usize, m: usize) -> Vec<Wire> {
        let n = x.len();
        if k == 0 || n <= 1 {
            return x.to_vec();
        }
        if k == 1 {
            return basic::max(self.b, x);
        }
        if let Some(out) = self.base_case(x, k) {
            return out;
        }
        let split = split_columns(n, m).expect("n >= 2");
        let mut prefixes = Vec::with_capacity(m);
        let mut out = Vec::new();
        for r in split.ranges() {
            let ki = k.min(r.len());
            let yi = self.oe(&x[r], ki, m);
            prefixes.push(yi[..ki].to_vec());
            out.extend_from_slice(&yi[ki..]);
        }
        prefixes.resize(m, Vec::new());
        let mut merged = match m {
            4 => oddeven::four_oe_merge(
                self.b,
                [&prefixes[0], &prefixes[1], &prefixes[2], &prefixes[3]],
                k,
            ),
            2 => basic::batcher_merge(self.b, &prefixes[0], &prefixes[1]),
            _ => unreachable!("checked by caller"),
        };
        merged.extend(out);
        merged
    }

    fn two_oe(&mut self, x: &[Wire], k: usize) -> Vec<Wire> {
        let n = x.len();
        if k == 0 || n <= 1 {
            return x.to_vec();
        }
        if k == 1 {
            return basic::max(self.b, x);
        }
        if let Some(out) = self.base_case(x, k) {
            return out;
        }
        if k == n {
            return basic::batcher_sort(self.b, x);
        }
        let x1 = basic::odd(x);
        let x2 = basic::even(x);
        let (k1, k2) = (k.min(x1.len()), k.min(x2.len()));
        let y1 = self.two_oe(&x1, k1);
        let y2 = self.two_oe(&x2, k2);
        let mut res = basic::batcher_merge(self.b, &y1[..k1], &y2[..k2]);
        res.extend_from_slice(&y1[k1..]);
        res.extend_from_slice(&y2[k2..]);
        res
    }

    fn pw(&mut self, x: &[Wire], k: usize) -> Vec<Wire> {
        let n = x.len();
        if k == 0 || n <= 1 {
            return x.to_vec();
        }
        if k == 1 {
            return basic::max(self.b, x);
        }
        if let Some(out) = self.base_case(x, k) {
            return out;
        }
        if k == n {
            return basic::batcher_sort(self.b, x);
        }
        let x = pairwise::pw_split(self.b, x);
        let h = n.div_ceil(2);
        let (ka, kb) = (k.min(h), (k / 2).min(n - h));
        let a = self.pw(&x[..h], ka);
        let bb = self.pw(&x[h..], kb);
        let mut res = pairwise::pw_merge(self.b, &a[..ka], &bb[..kb]);
        res.extend_from_slice(&a[ka..]);
        res.extend_from_slice(&bb[kb..]);
        res
    }
}

fn meta(p: &SelectParams) -> Meta {
    Meta {
        method: p.method.name().to_string(),
        n: p.n,
        k: p.k,
        m: p.method.columns(),
        base: p.base.to_string(),
    }
}

/// Builds the selection network described by `p` over fresh inputs.
pub fn build(p: &SelectParams) -> Result<Blueprint> {
    p.check()?;
    let mut b = NetworkBuilder::new(p.n);
    let ins = b.inputs();
    let out = select_into(&mut b, &ins, p.k, p.method, p.base, p.direct_limit)?;
    Ok(b.finish(out, meta(p)))
}

/// Appends a `k`-selection network over `x` to an existing builder.
pub fn select_into(
    b: &mut NetworkBuilder,
    x: &[Wire],
    k: usize,
    method: Method,
    base: BaseCase,
    direct_limit: usize,
) -> Result<Vec<Wire>> {
    let four_col = method.columns() == 4;
    let mut s = Sel { b, base, four_col };
    Ok(match method {
        Method::FourOddEven => s.oe(x, k, 4),
        Method::FourWise => s.mw(x, k, 4, None),
        Method::TwoOddEven => s.two_oe(x, k),
        Method::Pairwise => s.pw(x, k),
        Method::Direct => {
            if x.len() > direct_limit {
                return Err(Error::Config(format!(
                    "direct selection refused for n={} above limit {direct_limit}",
                    x.len()
                )));
            }
            if k == 0 {
                x.to_vec()
            } else {
                basic::direct(s.b, x, k)
            }
        }
        Method::Naive => return Err(Error::Config("naive encoding has no network".into())),
    })
}

/// Generic m-wise selection over an explicit top-level split.
pub fn build_mw_sel_split(
    k: usize,
    m: usize,
    split: &ColumnSplit,
    base: BaseCase,
) -> Result<Blueprint> {
    if m != 2 && m != 4 {
        return Err(Error::Config(format!("m-wise selection supports m in {{2,4}}, got {m}")));
    }
    if split.sizes.len() > m {
        return Err(Error::Shape(format!("{} columns for m={m}", split.sizes.len())));
    }
    let n = split.total();
    if k < 1 || k > n {
        return Err(Error::Shape(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let mut b = NetworkBuilder::new(n);
    let ins = b.inputs();
    let out = Sel { b: &mut b, base, four_col: m == 4 }.mw(&ins, k, m, Some(split));
    let meta = Meta { method: format!("{m}wise"), n, k, m, base: base.to_string() };
    Ok(b.finish(out, meta))
}

/// Generic m-wise selection (m in {2, 4}) with the balanced split.
pub fn build_mw_sel(n: usize, k: usize, m: usize, base: BaseCase) -> Result<Blueprint> {
    if n < 2 {
        return Err(Error::Degenerate(format!("n={n}")));
    }
    build_mw_sel_split(k, m, &split_columns(n, m)?, base)
}

/// Generic m-odd-even selection (m in {2, 4}) with the balanced split.
pub fn build_oe_sel(n: usize, k: usize, m: usize, base: BaseCase) -> Result<Blueprint> {
    if m != 2 && m != 4 {
        return Err(Error::Config(format!("odd-even selection supports m in {{2,4}}, got {m}")));
    }
    if k < 1 || k > n {
        return Err(Error::Shape(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let mut b = NetworkBuilder::new(n);
    let ins = b.inputs();
    let out = Sel { b: &mut b, base, four_col: m == 4 }.oe(&ins, k, m);
    let meta = Meta { method: format!("{m}oe_sel"), n, k, m, base: base.to_string() };
    Ok(b.finish(out, meta))
}

pub fn build_max(n: usize) -> Result<Blueprint> {
    if n == 0 {
        return Err(Error::Degenerate("max over zero inputs".into()));
    }
    let mut b = NetworkBuilder::new(n);
    let ins = b.inputs();
    let out = basic::max(&mut b, &ins);
    let meta = Meta { method: "max".into(), n, k: 1, m: 2, base: String::new() };
    Ok(b.finish(out, meta))
}

pub fn build_direct_select(n: usize, k: usize, threshold: usize) -> Result<Blueprint> {
    if k < 1 || k > n {
        return Err(Error::Shape(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    if n > threshold {
        return Err(Error::Config(format!("direct selection refused for n={n} above {threshold}")));
    }
    let mut b = NetworkBuilder::new(n);
    let ins = b.inputs();
    let out = basic::direct(&mut b, &ins, k);
    let meta = Meta { method: "direct".into(), n, k, m: n, base: String::new() };
    Ok(b.finish(out, meta))
}

/// The four-wise merger alone, over inputs laid out column after column with
/// lengths `min(c, k/i)`.
pub fn build_4w_merge(c: usize, k: usize) -> Result<(Blueprint, MergeTrace)> {
    if k > 4 * c || c == 0 {
        return Err(Error::Shape(format!("no 4-wise tuple of order ({c},{k})")));
    }
    let lens = mwise_lengths(c, k, 4);
    let s: usize = lens.iter().sum();
    let mut b = NetworkBuilder::new(s);
    let ins = b.inputs();
    let mut off = 0;
    let cols: Vec<Vec<Wire>> = lens
        .iter()
        .map(|&l| {
            off += l;
            ins[off - l..off].to_vec()
        })
        .collect();
    let cols: [Vec<Wire>; 4] = cols.try_into().expect("four columns");
    let (out, trace) = fourwise::four_wise_merge(&mut b, cols, k);
    let meta = Meta { method: "4w_merge".into(), n: s, k, m: 4, base: String::new() };
    Ok((b.finish(out, meta), trace))
}

/// The four-column odd-even merger alone, inputs laid out column after column.
pub fn build_4oe_merge(lens: [usize; 4], k: usize) -> Result<Blueprint> {
    if lens.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Shape(format!("column lengths {lens:?} must be non-increasing")));
    }
    if k == 0 {
        return Err(Error::Shape("merger order must be at least 1".into()));
    }
    let s: usize = lens.iter().sum();
    let mut b = NetworkBuilder::new(s);
    let ins = b.inputs();
    let mut off = 0;
    let cols: Vec<&[Wire]> = lens
        .iter()
        .map(|&l| {
            off += l;
            &ins[off - l..off]
        })
        .collect();
    let out = oddeven::four_oe_merge(&mut b, [cols[0], cols[1], cols[2], cols[3]], k);
    let meta = Meta { method: "4oe_merge".into(), n: s, k, m: 4, base: String::new() };
    Ok(b.finish(out, meta))
}

pub fn build_oe_combine(la: usize, lb: usize, k: usize) -> Result<Blueprint> {
    if k > la + lb {
        return Err(Error::Shape(format!("oe_combine order {k} exceeds {}", la + lb)));
    }
    let mut b = NetworkBuilder::new(la + lb);
    let ins = b.inputs();
    let out = oddeven::oe_combine(&mut b, &ins[..la], &ins[la..], k);
    let meta = Meta { method: "oe_combine".into(), n: la + lb, k, m: 2, base: String::new() };
    Ok(b.finish(out, meta))
}

/// Two-column odd-even merger (full Batcher merge) of sorted inputs.
pub fn build_2oe_merge(la: usize, lb: usize) -> Blueprint {
    let mut b = NetworkBuilder::new(la + lb);
    let ins = b.inputs();
    let out = basic::batcher_merge(&mut b, &ins[..la], &ins[la..]);
    let meta = Meta { method: "2oe_merge".into(), n: la + lb, k: la + lb, m: 2, base: String::new() };
    b.finish(out, meta)
}

/// Pairwise merger of a dominating sorted `a` and sorted `b`.
pub fn build_pw_merge(la: usize, lb: usize) -> Result<Blueprint> {
    if lb > la {
        return Err(Error::Shape("pairwise merge needs |a| >= |b|".into()));
    }
    let mut b = NetworkBuilder::new(la + lb);
    let ins = b.inputs();
    let out = pairwise::pw_merge(&mut b, &ins[..la], &ins[la..]);
    let meta = Meta { method: "pw_merge".into(), n: la + lb, k: la + lb, m: 2, base: String::new() };
    Ok(b.finish(out, meta))
}

pub fn build_pw_split(n: usize) -> Blueprint {
    let mut b = NetworkBuilder::new(n);
    let ins = b.inputs();
    let out = pairwise::pw_split(&mut b, &ins);
    let meta = Meta { method: "pw_split".into(), n, k: n, m: 2, base: String::new() };
    b.finish(out, meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_splits() {
        assert_eq!(split_columns(22, 4).unwrap().sizes, vec![6, 6, 5, 5]);
        assert_eq!(split_columns(8, 4).unwrap().sizes, vec![2, 2, 2, 2]);
        assert_eq!(split_columns(5, 4).unwrap().sizes, vec![2, 1, 1, 1]);
        assert_eq!(split_columns(3, 4).unwrap().sizes, vec![1, 1, 1]);
        assert!(matches!(split_columns(1, 4), Err(Error::Degenerate(_))));
        assert!(ColumnSplit::custom(vec![8, 7, 4, 3]).is_ok());
        assert!(ColumnSplit::custom(vec![3, 4]).is_err());
        assert!(ColumnSplit::custom(vec![5]).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("3oe".parse::<Method>().is_err());
    }

    #[test]
    fn direct_select_sizes() {
        let bp = build_direct_select(4, 2, 8).unwrap();
        let r = bp.count_gates();
        assert_eq!((r.variables, r.clauses), (2, 10));
        let bp = build_direct_select(2, 1, 8).unwrap();
        assert_eq!(bp.count_gates().clauses, 2);
        let bp = build_direct_select(4, 4, 8).unwrap();
        assert_eq!(bp.count_gates().clauses, 15);
        assert!(matches!(build_direct_select(9, 2, 8), Err(Error::Config(_))));
    }

    #[test]
    fn threshold_below_columns_is_rejected() {
        let p = SelectParams::new(Method::FourOddEven, 10, 3).with_base(BaseCase::Direct(3));
        assert!(matches!(build(&p), Err(Error::Config(_))));
        let p = SelectParams::new(Method::Pairwise, 10, 0);
        assert!(matches!(build(&p), Err(Error::Shape(_))));
    }

    #[test]
    fn pure_counts_k4() {
        let p = SelectParams::new(Method::FourOddEven, 16, 4).with_base(BaseCase::Pure);
        assert_eq!(build(&p).unwrap().count_gates().variables, 52);
        let p = SelectParams::new(Method::FourOddEven, 64, 4).with_base(BaseCase::Pure);
        assert_eq!(build(&p).unwrap().count_gates().variables, 244);
    }

    #[test]
    fn example_one_input_columns() {
        let split = ColumnSplit::custom(vec![8, 7, 4, 3]).unwrap();
        let bits = "11110100" .to_string() + "1000001" + "0000" + "101";
        let x: Vec<bool> = bits.chars().map(|c| c == '1').collect();
        let r = split.ranges();
        let col = |i: usize| -> String {
            x[r[i].clone()].iter().map(|&b| if b { '1' } else { '0' }).collect()
        };
        assert_eq!(col(0), "11110100");
        assert_eq!(col(1), "1000001");
        assert_eq!(col(2), "0000");
        assert_eq!(col(3), "101");
        let bp = build_mw_sel_split(6, 4, &split, BaseCase::Raw).unwrap();
        let y = bp.evaluate(&x).unwrap();
        assert!(y[..6].iter().all(|&b| b));
    }
}
