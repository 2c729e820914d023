//! Unit propagation to a fixpoint over occurrence lists.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, CnfFormula, Lit};

/// Partial assignment indexed by variable; slot 0 is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new(var_count: u32) -> Self {
        Assignment { values: vec![None; var_count as usize + 1] }
    }

    pub fn var_count(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.values[var as usize]
    }

    pub fn lit(&self, l: Lit) -> Option<bool> {
        self.get(l.var()).map(|v| l.eval(v))
    }

    /// Makes `l` true. Returns false, changing nothing, if `l` is already
    /// false.
    pub fn assign(&mut self, l: Lit) -> bool {
        match self.lit(l) {
            Some(v) => v,
            None => {
                self.values[l.var() as usize] = Some(l.is_positive());
                true
            }
        }
    }

    pub fn unassign(&mut self, var: u32) {
        self.values[var as usize] = None;
    }

    pub fn assigned(&self) -> usize {
        self.values.iter().skip(1).filter(|v| v.is_some()).count()
    }

    /// Unassigned variables default to false. Slot 0 is padding.
    pub fn to_model(&self) -> Vec<bool> {
        self.values.iter().map(|v| v.unwrap_or(false)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpOutcome {
    Fixpoint(Assignment),
    /// `clause` is the index of a clause with every literal false.
    Conflict { clause: usize, assignment: Assignment },
}

impl UpOutcome {
    pub fn is_conflict(&self) -> bool {
        matches!(self, UpOutcome::Conflict { .. })
    }
}

enum Status {
    Satisfied,
    Conflict,
    Unit(Lit),
    Open,
}

fn status(c: &Clause, a: &Assignment) -> Status {
    let mut free = None;
    let mut n_free = 0;
    for &l in c.lits() {
        match a.lit(l) {
            Some(true) => return Status::Satisfied,
            Some(false) => {}
            None => {
                n_free += 1;
                free = Some(l);
            }
        }
    }
    match (n_free, free) {
        (0, _) => Status::Conflict,
        (1, Some(l)) => Status::Unit(l),
        _ => Status::Open,
    }
}

fn slot(l: Lit) -> usize {
    2 * l.var() as usize + usize::from(!l.is_positive())
}

/// Propagates `a` over `clauses`. When `rng` is given, clauses and queued
/// literals are visited in random order; the fixpoint does not depend on it.
pub fn propagate(
    var_count: u32,
    clauses: &[Clause],
    a: &Assignment,
    mut rng: Option<&mut ChaCha8Rng>,
) -> UpOutcome {
    let mut a = a.clone();
    if a.var_count() < var_count {
        a.values.resize(var_count as usize + 1, None);
    }
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); 2 * var_count as usize + 2];
    for (i, c) in clauses.iter().enumerate() {
        for &l in c.lits() {
            occ[slot(l)].push(i);
        }
    }
    let mut order: Vec<usize> = (0..clauses.len()).collect();
    if let Some(r) = rng.as_deref_mut() {
        for i in (1..order.len()).rev() {
            order.swap(i, r.gen_range(0..=i));
        }
    }
    let mut queue: Vec<Lit> = Vec::new();
    for i in order {
        match status(&clauses[i], &a) {
            Status::Conflict => return UpOutcome::Conflict { clause: i, assignment: a },
            Status::Unit(l) => {
                a.assign(l);
                queue.push(l);
            }
            _ => {}
        }
    }
    while !queue.is_empty() {
        let pick = match rng.as_deref_mut() {
            Some(r) => r.gen_range(0..queue.len()),
            None => queue.len() - 1,
        };
        let l = queue.swap_remove(pick);
        for &i in &occ[slot(!l)] {
            match status(&clauses[i], &a) {
                Status::Conflict => return UpOutcome::Conflict { clause: i, assignment: a },
                Status::Unit(u) => {
                    a.assign(u);
                    queue.push(u);
                }
                _ => {}
            }
        }
    }
    UpOutcome::Fixpoint(a)
}

pub fn unit_propagate(f: &CnfFormula, a: &Assignment) -> UpOutcome {
    propagate(f.var_count, &f.clauses, a, None)
}

/// Same as [`unit_propagate`] with a seeded random visiting order.
pub fn unit_propagate_shuffled(f: &CnfFormula, a: &Assignment, seed: u64) -> UpOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    propagate(f.var_count, &f.clauses, a, Some(&mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{encode, CardinalityConstraint, EncodeParams, Instance, Relation};
    use crate::constructions::Method;

    fn formula(var_count: u32, cls: &[&[i64]]) -> CnfFormula {
        CnfFormula {
            var_count,
            original_vars: var_count,
            clauses: cls
                .iter()
                .map(|c| Clause::new(c.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()))
                .collect(),
            ..Default::default()
        }
    }

    fn at_most(n: u32, k: u64, method: Method) -> CnfFormula {
        let lits = (1..=n).map(Lit::pos).collect();
        let inst = Instance {
            var_count: n,
            clauses: vec![],
            constraints: vec![CardinalityConstraint::new(lits, Relation::Le, k).unwrap()],
        };
        encode(&inst, &EncodeParams::new(method)).unwrap()
    }

    #[test]
    fn implication_fires() {
        let f = formula(2, &[&[-1, 2]]);
        let mut a = Assignment::new(2);
        a.assign(Lit::pos(1));
        let UpOutcome::Fixpoint(r) = unit_propagate(&f, &a) else { panic!() };
        assert_eq!(r.get(2), Some(true));
    }

    #[test]
    fn max2_with_denial_conflicts() {
        let f = formula(4, &[&[-1, 3], &[-2, 3], &[-1, -2, 4], &[-3]]);
        let mut a = Assignment::new(4);
        a.assign(Lit::pos(1));
        assert!(unit_propagate(&f, &a).is_conflict());
    }

    #[test]
    fn at_most_one_forces_others_false() {
        let f = at_most(3, 1, Method::FourOddEven);
        let mut a = Assignment::new(f.var_count);
        a.assign(Lit::pos(1));
        let UpOutcome::Fixpoint(r) = unit_propagate(&f, &a) else { panic!() };
        assert_eq!((r.get(2), r.get(3)), (Some(false), Some(false)));
    }

    #[test]
    fn fixpoint_is_order_independent() {
        let f = at_most(9, 3, Method::FourWise);
        for mask in [0b111u32, 0b1010_0001, 0b1_0000_0011] {
            let mut a = Assignment::new(f.var_count);
            for v in 0..9 {
                if mask >> v & 1 == 1 {
                    a.assign(Lit::pos(v + 1));
                }
            }
            let base = unit_propagate(&f, &a);
            for seed in 0..20 {
                let r = unit_propagate_shuffled(&f, &a, seed);
                match (&base, &r) {
                    (UpOutcome::Fixpoint(x), UpOutcome::Fixpoint(y)) => assert_eq!(x, y),
                    (UpOutcome::Conflict { .. }, UpOutcome::Conflict { .. }) => {}
                    _ => panic!("orders disagree on mask {mask:b}"),
                }
            }
        }
    }

    #[test]
    fn empty_clause_conflicts_immediately() {
        let f = formula(1, &[&[]]);
        assert!(unit_propagate(&f, &Assignment::new(1)).is_conflict());
    }
}
