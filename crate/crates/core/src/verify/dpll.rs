//! A small complete solver: unit propagation plus chronological
//! backtracking on the lowest unassigned variable. No learning.

use super::up::{unit_propagate, Assignment, UpOutcome};
use crate::cnf::{CnfFormula, Lit};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// Full model; index 0 is padding.
    Sat(Vec<bool>),
    Unsat,
    BudgetExceeded,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

/// Solves `f`, giving up after `budget` decisions if one is set.
pub fn dpll_solve(f: &CnfFormula, budget: Option<u64>) -> SolveResult {
    let mut stack = vec![Assignment::new(f.var_count)];
    let mut decisions = 0u64;
    while let Some(a) = stack.pop() {
        let a = match unit_propagate(f, &a) {
            UpOutcome::Conflict { .. } => continue,
            UpOutcome::Fixpoint(a) => a,
        };
        let done = f.clauses.iter().all(|c| c.lits().iter().any(|&l| a.lit(l) == Some(true)));
        let next = (1..=f.var_count).find(|&v| a.get(v).is_none());
        let var = match next {
            Some(v) if !done => v,
            _ => {
                let model = a.to_model();
                assert!(f.satisfied_by(&model), "solver produced a non-model");
                return SolveResult::Sat(model);
            }
        };
        decisions += 1;
        if budget.is_some_and(|b| decisions > b) {
            return SolveResult::BudgetExceeded;
        }
        let mut neg = a.clone();
        neg.assign(Lit::neg(var));
        stack.push(neg);
        let mut pos = a;
        pos.assign(Lit::pos(var));
        stack.push(pos);
    }
    SolveResult::Unsat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{encode, CardinalityConstraint, Clause, EncodeParams, Instance, Relation};
    use crate::constructions::Method;

    #[test]
    fn trivial_cases() {
        assert!(dpll_solve(&CnfFormula::default(), None).is_sat());
        let f = CnfFormula {
            var_count: 1,
            original_vars: 1,
            clauses: vec![Clause::unit(Lit::pos(1)), Clause::unit(Lit::neg(1))],
            ..Default::default()
        };
        assert_eq!(dpll_solve(&f, None), SolveResult::Unsat);
    }

    #[test]
    fn contradictory_cardinalities_are_unsat() {
        let lits: Vec<Lit> = (1..=5).map(Lit::pos).collect();
        let inst = Instance {
            var_count: 5,
            clauses: vec![],
            constraints: vec![
                CardinalityConstraint::new(lits.clone(), Relation::Ge, 3).unwrap(),
                CardinalityConstraint::new(lits, Relation::Lt, 3).unwrap(),
            ],
        };
        for m in Method::ALL {
            let f = encode(&inst, &EncodeParams::new(m)).unwrap();
            assert_eq!(dpll_solve(&f, None), SolveResult::Unsat, "{m}");
        }
    }

    #[test]
    fn model_satisfies_constraint() {
        let lits: Vec<Lit> = (1..=6).map(Lit::pos).collect();
        let inst = Instance {
            var_count: 6,
            clauses: vec![],
            constraints: vec![CardinalityConstraint::new(lits, Relation::Eq, 4).unwrap()],
        };
        let f = encode(&inst, &EncodeParams::new(Method::FourWise)).unwrap();
        let SolveResult::Sat(m) = dpll_solve(&f, None) else { panic!() };
        assert!(inst.holds(&m[..7]));
    }

    #[test]
    fn budget_is_reported() {
        // pigeonhole 4 into 3 needs many decisions without learning
        let mut clauses = Vec::new();
        let v = |p: u32, h: u32| p * 3 + h + 1;
        for p in 0..4 {
            clauses.push(Clause::new((0..3).map(|h| Lit::pos(v(p, h))).collect()));
        }
        for h in 0..3 {
            for p in 0..4 {
                for q in p + 1..4 {
                    clauses.push(Clause::new(vec![Lit::neg(v(p, h)), Lit::neg(v(q, h))]));
                }
            }
        }
        let f = CnfFormula { var_count: 12, original_vars: 12, clauses, ..Default::default() };
        assert_eq!(dpll_solve(&f, Some(2)), SolveResult::BudgetExceeded);
        assert_eq!(dpll_solve(&f, None), SolveResult::Unsat);
    }
}
