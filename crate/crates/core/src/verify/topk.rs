//! Reference checks for top-k sortedness.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub input: Vec<bool>,
    pub output: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopKVerdict {
    pub ok: bool,
    pub witness: Option<Witness>,
}

impl TopKVerdict {
    pub fn pass() -> Self {
        TopKVerdict { ok: true, witness: None }
    }

    pub fn fail(input: Vec<bool>, output: Vec<bool>) -> Self {
        TopKVerdict { ok: false, witness: Some(Witness { input, output }) }
    }
}

/// The prefix of length `k` is non-increasing and every prefix element is at
/// least every suffix element.
pub fn is_top_k_sorted(x: &[bool], k: usize) -> Result<TopKVerdict> {
    if k > x.len() {
        return Err(Error::Shape(format!("k={k} exceeds length {}", x.len())));
    }
    let (pre, suf) = x.split_at(k);
    let sorted = pre.windows(2).all(|w| w[0] >= w[1]);
    let min_pre = pre.iter().copied().min().unwrap_or(true);
    let max_suf = suf.iter().copied().max().unwrap_or(false);
    if sorted && (k == 0 || min_pre >= max_suf) {
        Ok(TopKVerdict::pass())
    } else {
        Ok(TopKVerdict::fail(x.to_vec(), x.to_vec()))
    }
}

/// The canonical top-k sorted permutation: everything sorted.
pub fn brute_force_top_k(x: &[bool], k: usize) -> Result<Vec<bool>> {
    if k > x.len() {
        return Err(Error::Shape(format!("k={k} exceeds length {}", x.len())));
    }
    let mut y = x.to_vec();
    y.sort_unstable_by(|a, b| b.cmp(a));
    Ok(y)
}

/// A binary sequence is top-k full when it starts with k ones.
pub fn is_top_k_full(x: &[bool], k: usize) -> bool {
    k <= x.len() && x[..k].iter().all(|&b| b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn definition_examples() {
        assert!(!is_top_k_sorted(&bits("1010"), 2).unwrap().ok);
        assert!(is_top_k_sorted(&bits("1101"), 2).unwrap().ok);
        for k in 0..=5 {
            assert!(is_top_k_sorted(&bits("11100"), k).unwrap().ok);
        }
        assert!(is_top_k_sorted(&bits("01"), 3).is_err());
        let v = is_top_k_sorted(&bits("0110"), 1).unwrap();
        assert_eq!(v.witness.unwrap().input, bits("0110"));
    }

    #[test]
    fn brute_force() {
        assert_eq!(brute_force_top_k(&bits("010"), 2).unwrap(), bits("100"));
        assert_eq!(brute_force_top_k(&bits("11"), 1).unwrap(), bits("11"));
    }

    #[test]
    fn full() {
        assert!(is_top_k_full(&bits("1110"), 3));
        assert!(!is_top_k_full(&bits("1101"), 3));
        assert!(is_top_k_full(&bits(""), 0));
    }
}
