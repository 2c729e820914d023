//! Literals, clauses, cardinality constraints and their CNF encodings.

mod encode;
mod normalize;

use std::fmt;
use std::ops::Not;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::CountReport;

pub use encode::{emit_sorter, encode, EncodeParams, EncodingHandle, OutLit, DEFAULT_NAIVE_LIMIT};
pub use normalize::{normalize_relation, AtMost, Normalized};

/// A possibly negated variable. Variables are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    var: u32,
    neg: bool,
}

impl Lit {
    pub fn new(var: u32, positive: bool) -> Result<Self> {
        if var == 0 {
            return Err(Error::Shape("variable 0 does not exist".into()));
        }
        Ok(Lit { var, neg: !positive })
    }

    /// Panics on variable 0.
    pub fn pos(var: u32) -> Self {
        Lit::new(var, true).expect("variable >= 1")
    }

    /// Panics on variable 0.
    pub fn neg(var: u32) -> Self {
        Lit::new(var, false).expect("variable >= 1")
    }

    pub fn from_dimacs(x: i64) -> Option<Self> {
        let var = u32::try_from(x.unsigned_abs()).ok()?;
        Lit::new(var, x > 0).ok()
    }

    pub fn to_dimacs(self) -> i64 {
        if self.neg {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        !self.neg
    }

    /// Value of the literal under a value of its variable.
    pub fn eval(self, var_value: bool) -> bool {
        var_value != self.neg
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit { var: self.var, neg: !self.neg }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals. The empty clause is the explicit falsum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    /// Drops repeated literals, keeping first occurrences in order.
    pub fn new(lits: Vec<Lit>) -> Self {
        let mut out: Vec<Lit> = Vec::with_capacity(lits.len());
        for l in lits {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Clause { lits: out }
    }

    pub fn unit(l: Lit) -> Self {
        Clause { lits: vec![l] }
    }

    pub fn empty() -> Self {
        Clause { lits: Vec::new() }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.lits.iter().any(|&l| self.lits.contains(&!l))
    }

    /// `values[v]` is the value of variable v (index 0 unused).
    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        self.lits.iter().any(|l| l.eval(values[l.var() as usize]))
    }

    pub fn max_var(&self) -> u32 {
        self.lits.iter().map(|l| l.var()).max().unwrap_or(0)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lits {
            write!(f, "{l} ")?;
        }
        f.write_str("0")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    pub fn holds(self, sum: u64, k: u64) -> bool {
        match self {
            Relation::Lt => sum < k,
            Relation::Le => sum <= k,
            Relation::Eq => sum == k,
            Relation::Ge => sum >= k,
            Relation::Gt => sum > k,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Relation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "<" => Relation::Lt,
            "<=" => Relation::Le,
            "=" | "==" => Relation::Eq,
            ">=" => Relation::Ge,
            ">" => Relation::Gt,
            _ => return Err(Error::Config(format!("unknown relation `{s}`"))),
        })
    }
}

/// `lits[0] + ... + lits[n-1] rel k` over a literal multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityConstraint {
    pub lits: Vec<Lit>,
    pub rel: Relation,
    pub k: u64,
}

impl CardinalityConstraint {
    pub fn new(lits: Vec<Lit>, rel: Relation, k: u64) -> Result<Self> {
        if lits.is_empty() {
            return Err(Error::Shape("cardinality constraint over no literals".into()));
        }
        Ok(CardinalityConstraint { lits, rel, k })
    }

    pub fn holds(&self, values: &[bool]) -> bool {
        let sum = self.lits.iter().filter(|l| l.eval(values[l.var() as usize])).count();
        self.rel.holds(sum as u64, self.k)
    }
}

impl fmt::Display for CardinalityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lits {
            write!(f, "{l} ")?;
        }
        write!(f, "{} {}", self.rel, self.k)
    }
}

/// Base clauses plus cardinality constraints over variables 1..=var_count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instance {
    pub var_count: u32,
    pub clauses: Vec<Clause>,
    pub constraints: Vec<CardinalityConstraint>,
}

impl Instance {
    pub fn check(&self) -> Result<()> {
        let over = |v: u32| v > self.var_count;
        if let Some(c) = self.clauses.iter().find(|c| over(c.max_var())) {
            return Err(Error::Shape(format!("clause `{c}` exceeds {} variables", self.var_count)));
        }
        for c in &self.constraints {
            if c.lits.is_empty() {
                return Err(Error::Shape("cardinality constraint over no literals".into()));
            }
            if c.lits.iter().any(|l| over(l.var())) {
                return Err(Error::Shape(format!("constraint `{c}` exceeds {} variables", self.var_count)));
            }
        }
        Ok(())
    }

    /// Whether a full assignment (`values[0]` unused) satisfies everything.
    pub fn holds(&self, values: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(values))
            && self.constraints.iter().all(|c| c.holds(values))
    }
}

/// Per-constraint summary, rendered as a DIMACS comment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintNote {
    pub method: String,
    /// Number of constrained literals.
    pub n: usize,
    /// Selection order (bound + 1).
    pub k: usize,
    pub aux_vars: u32,
    pub clauses: usize,
}

impl fmt::Display for ConstraintNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "method={} n={} k={} aux_vars={} clauses={}",
            self.method, self.n, self.k, self.aux_vars, self.clauses
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormulaStats {
    pub gates: CountReport,
    pub base_clauses: usize,
    pub unit_clauses: usize,
    pub naive_clauses: usize,
    pub falsum_clauses: usize,
}

impl FormulaStats {
    pub fn total_clauses(&self) -> u64 {
        self.gates.clauses
            + (self.base_clauses + self.unit_clauses + self.naive_clauses + self.falsum_clauses)
                as u64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CnfFormula {
    pub var_count: u32,
    /// Variables 1..=original_vars come from the instance.
    pub original_vars: u32,
    pub clauses: Vec<Clause>,
    pub stats: FormulaStats,
    pub notes: Vec<ConstraintNote>,
    pub diagnostics: Vec<String>,
}

impl CnfFormula {
    pub fn aux_vars(&self) -> u32 {
        self.var_count - self.original_vars
    }

    /// Whether every clause holds under a full assignment.
    pub fn satisfied_by(&self, values: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(values))
    }
}
