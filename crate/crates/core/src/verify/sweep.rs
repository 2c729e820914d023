//! Exhaustive and sampled checks of built networks against the oracles.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generators::{gen_mwise_tuples, gen_topk_columns, Columns};
use super::topk::{brute_force_top_k, is_top_k_full, is_top_k_sorted, TopKVerdict};
use crate::constructions::{build_4oe_merge, build_4w_merge, build_oe_combine};
use crate::error::Result;
use crate::network::Blueprint;

/// Largest n swept exhaustively.
pub const EXHAUSTIVE_MAX_N: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub checked: u64,
    pub verdict: TopKVerdict,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.verdict.ok
    }
}

/// Checks one input/output pair: the first `k` outputs must equal the sorted
/// input's first `k`; for complete networks the whole output must also be a
/// top-k sorted permutation.
pub fn check_pair(x: &[bool], y: &[bool], k: usize, complete: bool) -> TopKVerdict {
    let fail = || TopKVerdict::fail(x.to_vec(), y.to_vec());
    let Ok(want) = brute_force_top_k(x, k) else { return fail() };
    if y.len() < k || y[..k] != want[..k] {
        return fail();
    }
    if complete {
        let ones = |v: &[bool]| v.iter().filter(|&&b| b).count();
        if y.len() != x.len() || ones(x) != ones(y) {
            return fail();
        }
        match is_top_k_sorted(y, k) {
            Ok(v) if v.ok => {}
            _ => return fail(),
        }
    }
    TopKVerdict::pass()
}

fn lane_bits(words: &[u64], lane: usize) -> Vec<bool> {
    words.iter().map(|w| w >> lane & 1 == 1).collect()
}

/// Fast lane-parallel screen; falls back to the scalar oracle on the first
/// suspicious lane so that failures carry a witness.
fn check_chunk(bp: &Blueprint, k: usize, lanes: &[u64], valid: u64) -> Result<Option<TopKVerdict>> {
    let out = bp.evaluate_lanes(lanes)?;
    let complete = bp.is_complete();
    let mut counts = [0u32; 64];
    for w in lanes {
        let mut w = *w;
        while w != 0 {
            counts[w.trailing_zeros() as usize] += 1;
            w &= w - 1;
        }
    }
    let mut bad = 0u64;
    for (p, word) in out.iter().take(k).enumerate() {
        let mut expect = 0u64;
        for (l, &c) in counts.iter().enumerate() {
            if c as usize > p {
                expect |= 1 << l;
            }
        }
        bad |= (word ^ expect) & valid;
    }
    if complete {
        let mut out_counts = [0u32; 64];
        for w in &out {
            let mut w = *w;
            while w != 0 {
                out_counts[w.trailing_zeros() as usize] += 1;
                w &= w - 1;
            }
        }
        for l in 0..64 {
            if valid >> l & 1 == 1 && out_counts[l] != counts[l] {
                bad |= 1 << l;
            }
        }
    }
    if bad == 0 {
        return Ok(None);
    }
    let lane = bad.trailing_zeros() as usize;
    let x = lane_bits(lanes, lane);
    let y = lane_bits(&out, lane);
    let v = check_pair(&x, &y, k, complete);
    debug_assert!(!v.ok, "screen and oracle disagree");
    Ok(Some(v))
}

/// Every one of the 2^n inputs.
pub fn exhaustive(bp: &Blueprint, k: usize) -> Result<SweepReport> {
    let n = bp.n_inputs;
    assert!(n <= EXHAUSTIVE_MAX_N, "exhaustive sweep over n={n} is too large");
    let total: u64 = 1 << n;
    let mut lanes = vec![0u64; n];
    let mut base = 0u64;
    while base < total {
        let width = (total - base).min(64);
        let valid = if width == 64 { !0 } else { (1u64 << width) - 1 };
        for (i, word) in lanes.iter_mut().enumerate() {
            let mut w = 0u64;
            for l in 0..width {
                w |= ((base + l) >> i & 1) << l;
            }
            *word = w;
        }
        if let Some(v) = check_chunk(bp, k, &lanes, valid)? {
            return Ok(SweepReport { checked: base + width, verdict: v });
        }
        base += width;
    }
    Ok(SweepReport { checked: total, verdict: TopKVerdict::pass() })
}

/// `samples` uniformly random inputs from a seeded generator.
pub fn sampled(bp: &Blueprint, k: usize, samples: u64, seed: u64) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lanes = vec![0u64; bp.n_inputs];
    let mut done = 0u64;
    while done < samples {
        let width = (samples - done).min(64);
        let valid = if width == 64 { !0 } else { (1u64 << width) - 1 };
        for w in lanes.iter_mut() {
            *w = rng.next_u64();
        }
        if let Some(v) = check_chunk(bp, k, &lanes, valid)? {
            return Ok(SweepReport { checked: done + width, verdict: v });
        }
        done += width;
    }
    Ok(SweepReport { checked: samples, verdict: TopKVerdict::pass() })
}

/// Exhaustive up to `exhaustive_max` inputs, sampled above it.
pub fn verify_selection(
    bp: &Blueprint,
    k: usize,
    exhaustive_max: usize,
    samples: u64,
    seed: u64,
) -> Result<SweepReport> {
    if bp.n_inputs <= exhaustive_max {
        exhaustive(bp, k)
    } else {
        sampled(bp, k, samples, seed)
    }
}

fn flatten(cols: &Columns) -> Vec<bool> {
    cols.iter().flatten().copied().collect()
}

/// Outcome of a merger contract check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractReport {
    pub cases: u64,
    pub failures: Vec<String>,
}

impl ContractReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The four-wise merger on every 4-wise tuple of order (c, k) for
/// c <= max_c, k <= max_k, k <= 4c.
pub fn four_wise_contract(max_c: usize, max_k: usize) -> Result<ContractReport> {
    let mut rep = ContractReport { cases: 0, failures: Vec::new() };
    for c in 1..=max_c {
        for k in 1..=max_k.min(4 * c) {
            let (bp, _) = build_4w_merge(c, k)?;
            for t in gen_mwise_tuples(c, k, 4)? {
                let x = flatten(&t);
                let y = bp.evaluate(&x)?;
                rep.cases += 1;
                let v = check_pair(&x, &y, k.min(x.len()), true);
                if !v.ok {
                    // ones per column, to line up with the merger's case analysis
                    let ones: Vec<usize> = t.iter().map(|col| col.iter().filter(|&&b| b).count()).collect();
                    rep.failures.push(format!("c={c} k={k} input={} ones={ones:?}", show(&x)));
                }
            }
        }
    }
    Ok(rep)
}

/// The four-column odd-even merger on every tuple of top-k sorted columns
/// with lengths <= max_len, for 1 <= k <= max_k.
pub fn four_oe_contract(max_len: usize, max_k: usize) -> Result<ContractReport> {
    let mut rep = ContractReport { cases: 0, failures: Vec::new() };
    for k in 1..=max_k {
        let mut cache: Vec<([usize; 4], Blueprint)> = Vec::new();
        for t in gen_topk_columns(max_len, k) {
            let lens = [t[0].len(), t[1].len(), t[2].len(), t[3].len()];
            let s: usize = lens.iter().sum();
            if s == 0 {
                continue;
            }
            let bp = match cache.iter().find(|(l, _)| *l == lens) {
                Some((_, bp)) => bp,
                None => {
                    cache.push((lens, build_4oe_merge(lens, k)?));
                    &cache.last().unwrap().1
                }
            };
            let x = flatten(&t);
            let y = bp.evaluate(&x)?;
            rep.cases += 1;
            let v = check_pair(&x, &y, k.min(s), true);
            if !v.ok {
                rep.failures.push(format!("lens={lens:?} k={k} input={}", show(&x)));
            }
        }
    }
    Ok(rep)
}

/// For every a top-l full and b top-k full with 0 <= l-k <= 2 and every
/// order K >= l+k, the combined sequence is top-(l+k) full.
pub fn combine_contract(max_len: usize) -> Result<ContractReport> {
    let mut rep = ContractReport { cases: 0, failures: Vec::new() };
    for la in 0..=max_len {
        for lb in 0..=max_len {
            for big_k in 0..=la + lb {
                let bp = build_oe_combine(la, lb, big_k)?;
                for l in 0..=la {
                    for k in l.saturating_sub(2)..=l.min(lb) {
                        if l + k > big_k {
                            continue;
                        }
                        for tail_a in 0u64..(1 << (la - l)) {
                            for tail_b in 0u64..(1 << (lb - k)) {
                                let mut x = vec![true; l];
                                x.extend((0..la - l).map(|j| tail_a >> j & 1 == 1));
                                x.extend(std::iter::repeat_n(true, k));
                                x.extend((0..lb - k).map(|j| tail_b >> j & 1 == 1));
                                let y = bp.evaluate(&x)?;
                                rep.cases += 1;
                                if !is_top_k_full(&y, l + k) {
                                    rep.failures.push(format!(
                                        "|a|={la} |b|={lb} K={big_k} l={l} k={k} input={}",
                                        show(&x)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(rep)
}

pub fn show(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
