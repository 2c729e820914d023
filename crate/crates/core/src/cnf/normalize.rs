use std::collections::HashMap;

use super::{CardinalityConstraint, Lit, Relation};

/// At most `k` of `lits` are true, with `k < lits.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtMost {
    pub lits: Vec<Lit>,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    AtMost(AtMost),
    /// Unsatisfiable whatever the assignment.
    Falsum,
}

/// Rewrites any relation as at-most constraints. Always-true parts vanish,
/// so an empty result means the constraint is trivially satisfied.
pub fn normalize_relation(c: &CardinalityConstraint) -> Vec<Normalized> {
    let n = c.lits.len() as i64;
    let k = c.k.min(i64::MAX as u64 / 2) as i64;
    let negated = || c.lits.iter().map(|&l| !l).collect::<Vec<_>>();
    let parts: Vec<(Vec<Lit>, i64)> = match c.rel {
        Relation::Lt => vec![(c.lits.clone(), k - 1)],
        Relation::Le => vec![(c.lits.clone(), k)],
        Relation::Ge => vec![(negated(), n - k)],
        Relation::Gt => vec![(negated(), n - k - 1)],
        Relation::Eq => vec![(c.lits.clone(), k), (negated(), n - k)],
    };
    parts.into_iter().filter_map(|(l, b)| at_most(l, b)).collect()
}

fn at_most(lits: Vec<Lit>, bound: i64) -> Option<Normalized> {
    let (lits, pairs) = drop_complementary(lits);
    let bound = bound - pairs as i64;
    if bound < 0 {
        Some(Normalized::Falsum)
    } else if bound as usize >= lits.len() {
        None
    } else {
        Some(Normalized::AtMost(AtMost { lits, k: bound as usize }))
    }
}

/// Removes x, !x pairs (each contributes exactly one). Returns the remaining
/// literals in order and the number of pairs removed.
fn drop_complementary(lits: Vec<Lit>) -> (Vec<Lit>, usize) {
    let mut pos: HashMap<u32, usize> = HashMap::new();
    let mut neg: HashMap<u32, usize> = HashMap::new();
    for l in &lits {
        let m = if l.is_positive() { &mut pos } else { &mut neg };
        *m.entry(l.var()).or_default() += 1;
    }
    let mut quota: HashMap<u32, (usize, usize)> = HashMap::new();
    let mut pairs = 0;
    for (&v, &p) in &pos {
        let q = neg.get(&v).copied().unwrap_or(0);
        let r = p.min(q);
        if r > 0 {
            quota.insert(v, (r, r));
            pairs += r;
        }
    }
    let kept = lits
        .into_iter()
        .filter(|l| match quota.get_mut(&l.var()) {
            Some((p, _)) if l.is_positive() && *p > 0 => {
                *p -= 1;
                false
            }
            Some((_, q)) if !l.is_positive() && *q > 0 => {
                *q -= 1;
                false
            }
            _ => true,
        })
        .collect();
    (kept, pairs)
}
