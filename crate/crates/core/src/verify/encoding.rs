//! Checks on whole encodings: propagation strength and equisatisfiability.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dpll::{dpll_solve, SolveResult};
use super::sweep::ContractReport;
use super::up::{unit_propagate, Assignment, UpOutcome};
use crate::cnf::{encode, CardinalityConstraint, Clause, EncodeParams, Instance, Lit, Relation};
use crate::error::Result;

/// Calls `f` on every subset of 0..n of size `p`, as a bit mask.
fn subsets(n: usize, p: usize, mut f: impl FnMut(u32)) {
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == p {
            f(mask);
        }
    }
}

/// At-most-`k` over n fresh variables: every assignment of exactly k
/// literals to true must make unit propagation set all others false, and
/// k+1 true literals must propagate to a conflict.
pub fn arc_consistency(n: usize, k: usize, p: &EncodeParams) -> Result<ContractReport> {
    let lits: Vec<Lit> = (1..=n as u32).map(Lit::pos).collect();
    let inst = Instance {
        var_count: n as u32,
        clauses: vec![],
        constraints: vec![CardinalityConstraint::new(lits, Relation::Le, k as u64)?],
    };
    let f = encode(&inst, p)?;
    let mut rep = ContractReport { cases: 0, failures: Vec::new() };
    let assign = |mask: u32| {
        let mut a = Assignment::new(f.var_count);
        for v in 0..n {
            if mask >> v & 1 == 1 {
                a.assign(Lit::pos(v as u32 + 1));
            }
        }
        a
    };
    subsets(n, k, |mask| {
        rep.cases += 1;
        match unit_propagate(&f, &assign(mask)) {
            UpOutcome::Conflict { clause, .. } => {
                rep.failures.push(format!("n={n} k={k} true={mask:b}: conflict in clause {clause}"))
            }
            UpOutcome::Fixpoint(a) => {
                let open: Vec<u32> =
                    (1..=n as u32).filter(|&v| mask >> (v - 1) & 1 == 0 && a.get(v) != Some(false)).collect();
                if !open.is_empty() {
                    rep.failures.push(format!("n={n} k={k} true={mask:b}: not forced false {open:?}"));
                }
            }
        }
    });
    if k < n {
        subsets(n, k + 1, |mask| {
            rep.cases += 1;
            if !unit_propagate(&f, &assign(mask)).is_conflict() {
                rep.failures.push(format!("n={n} k={k} true={mask:b}: no conflict"));
            }
        });
    }
    Ok(rep)
}

/// A random instance over 1..=max_vars variables with at most three base
/// clauses and at most `max_constraints` constraints of any relation.
pub fn random_instance(rng: &mut ChaCha8Rng, max_vars: u32, max_constraints: usize) -> Instance {
    let n = rng.gen_range(1..=max_vars);
    let lit = |rng: &mut ChaCha8Rng| {
        let v = rng.gen_range(1..=n);
        if rng.gen_bool(0.5) {
            Lit::pos(v)
        } else {
            Lit::neg(v)
        }
    };
    let clauses = (0..rng.gen_range(0..=3))
        .map(|_| {
            let len = rng.gen_range(1..=3);
            Clause::new((0..len).map(|_| lit(rng)).collect())
        })
        .collect();
    let rels = [Relation::Lt, Relation::Le, Relation::Eq, Relation::Ge, Relation::Gt];
    let constraints = (0..rng.gen_range(0..=max_constraints))
        .map(|_| {
            let len = rng.gen_range(1..=n as usize + 1);
            let lits: Vec<Lit> = (0..len).map(|_| lit(rng)).collect();
            let rel = rels[rng.gen_range(0..rels.len())];
            let k = rng.gen_range(0..=len as u64 + 1);
            CardinalityConstraint { lits, rel, k }
        })
        .collect();
    Instance { var_count: n, clauses, constraints }
}

/// Satisfiability by enumerating all 2^n assignments.
pub fn brute_force_sat(inst: &Instance) -> bool {
    let n = inst.var_count as usize;
    let mut values = vec![false; n + 1];
    (0u64..1 << n).any(|mask| {
        for (v, x) in values.iter_mut().enumerate().skip(1) {
            *x = mask >> (v - 1) & 1 == 1;
        }
        inst.holds(&values)
    })
}

/// Compares the solver on `inst`'s encoding with brute force. Returns a
/// description of the disagreement, if any.
pub fn equisat_case(inst: &Instance, p: &EncodeParams) -> Result<Option<String>> {
    let want = brute_force_sat(inst);
    let f = encode(inst, p)?;
    let got = dpll_solve(&f, None);
    Ok(match got {
        SolveResult::Sat(m) if !want => Some(format!("encoding SAT, instance UNSAT (model {m:?})")),
        SolveResult::Sat(m) if !inst.holds(&m[..=inst.var_count as usize]) => {
            Some("model violates the instance".into())
        }
        SolveResult::Unsat if want => Some("encoding UNSAT, instance SAT".into()),
        SolveResult::BudgetExceeded => Some("solver budget exceeded".into()),
        _ => None,
    })
}

/// `count` seeded random instances, each checked under every parameter set.
pub fn equisat_sweep(count: usize, seed: u64, params: &[EncodeParams]) -> Result<ContractReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ContractReport { cases: 0, failures: Vec::new() };
    for i in 0..count {
        let inst = random_instance(&mut rng, 8, 3);
        for p in params {
            rep.cases += 1;
            if let Some(why) = equisat_case(&inst, p)? {
                rep.failures.push(format!("instance {i} method={}: {why}", p.method));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Method;

    #[test]
    fn small_arc_consistency() {
        for m in Method::ALL {
            for n in 1..=6 {
                for k in 0..n {
                    let r = arc_consistency(n, k, &EncodeParams::new(m)).unwrap();
                    assert!(r.ok(), "{m}: {:?}", r.failures);
                }
            }
        }
    }

    #[test]
    fn broken_encoding_is_caught() {
        // a formula missing its unit clause never conflicts
        let lits: Vec<Lit> = (1..=3).map(Lit::pos).collect();
        let inst = Instance {
            var_count: 3,
            clauses: vec![],
            constraints: vec![CardinalityConstraint::new(lits, Relation::Le, 1).unwrap()],
        };
        let mut f = encode(&inst, &EncodeParams::new(Method::TwoOddEven)).unwrap();
        f.clauses.pop();
        let mut a = Assignment::new(f.var_count);
        a.assign(Lit::pos(1));
        a.assign(Lit::pos(2));
        assert!(!unit_propagate(&f, &a).is_conflict());
    }

    #[test]
    fn brute_force_basics() {
        let inst = Instance {
            var_count: 2,
            clauses: vec![Clause::unit(Lit::pos(1))],
            constraints: vec![CardinalityConstraint::new(vec![Lit::pos(1), Lit::pos(2)], Relation::Lt, 1).unwrap()],
        };
        assert!(!brute_force_sat(&inst));
    }

    #[test]
    fn short_equisat_sweep() {
        let params: Vec<EncodeParams> = Method::ALL.iter().map(|&m| EncodeParams::new(m)).collect();
        let r = equisat_sweep(50, 1, &params).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }
}
