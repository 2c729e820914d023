use super::{
    normalize_relation, AtMost, Clause, CnfFormula, ConstraintNote, FormulaStats, Instance, Lit,
    Normalized,
};
use crate::constructions::{
    build, BaseCase, Method, SelectParams, DEFAULT_DIRECT_LIMIT, DEFAULT_DIRECT_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::network::{binomial, Blueprint, WireKind};

/// Largest clause count the naive encoding may produce for one constraint.
pub const DEFAULT_NAIVE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EncodeParams {
    pub method: Method,
    pub base: BaseCase,
    pub direct_limit: usize,
    pub naive_limit: u64,
}

impl EncodeParams {
    pub fn new(method: Method) -> Self {
        EncodeParams {
            method,
            base: BaseCase::Direct(DEFAULT_DIRECT_THRESHOLD),
            direct_limit: DEFAULT_DIRECT_LIMIT,
            naive_limit: DEFAULT_NAIVE_LIMIT,
        }
    }

    pub fn with_base(mut self, base: BaseCase) -> Self {
        self.base = base;
        self
    }

    fn select(&self, n: usize, k: usize) -> SelectParams {
        SelectParams { n, k, method: self.method, base: self.base, direct_limit: self.direct_limit }
    }
}

/// What a network output wire denotes in the formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutLit {
    Lit(Lit),
    False,
    True,
}

/// Clauses of one sorter over `inputs` exposing the top `width` outputs.
/// Allocates `width` fresh variables starting at `*next_var + 1` and emits
/// (!x_i1 | ... | !x_ip | y_p) for every p <= width and every p-subset.
pub fn emit_sorter(inputs: &[Lit], width: usize, next_var: &mut u32) -> Result<(Vec<Lit>, Vec<Clause>)> {
    if width == 0 || width > inputs.len() {
        return Err(Error::Contract(format!("sorter of arity {} with width {width}", inputs.len())));
    }
    let ys: Vec<Lit> = (1..=width as u32).map(|i| Lit::pos(*next_var + i)).collect();
    *next_var += width as u32;
    let mut clauses = Vec::new();
    for (p, &y) in ys.iter().enumerate() {
        for_each_subset(inputs.len(), p + 1, |idx| {
            let mut c: Vec<Lit> = idx.iter().map(|&i| !inputs[i]).collect();
            c.push(y);
            clauses.push(Clause::new(c));
        });
    }
    Ok((ys, clauses))
}

/// Calls `f` on every `p`-subset of 0..n in lexicographic order.
fn for_each_subset(n: usize, p: usize, mut f: impl FnMut(&[usize])) {
    if p > n {
        return;
    }
    let mut idx: Vec<usize> = (0..p).collect();
    loop {
        f(&idx);
        let Some(i) = (0..p).rev().find(|&i| idx[i] < n - p + i) else { return };
        idx[i] += 1;
        for j in i + 1..p {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct Emitter {
    var_count: u32,
    clauses: Vec<Clause>,
    stats: FormulaStats,
    diagnostics: Vec<String>,
}

impl Emitter {
    fn new(var_count: u32) -> Self {
        Emitter { var_count, clauses: Vec::new(), stats: FormulaStats::default(), diagnostics: Vec::new() }
    }

    /// Emits every gate of `bp` with inputs bound to `inputs`; returns what
    /// each network output denotes.
    fn network(&mut self, bp: &Blueprint, inputs: &[Lit]) -> Result<Vec<OutLit>> {
        let mut lit_of: Vec<Option<OutLit>> = bp
            .wires
            .iter()
            .map(|w| match *w {
                WireKind::Input(p) => Some(OutLit::Lit(inputs[p])),
                WireKind::False => Some(OutLit::False),
                WireKind::True => Some(OutLit::True),
                WireKind::GateOutput { .. } => None,
            })
            .collect();
        for (gi, g) in bp.gates.iter().enumerate() {
            let ins = g
                .inputs
                .iter()
                .map(|w| match lit_of[w.index()] {
                    Some(OutLit::Lit(l)) => Ok(l),
                    other => Err(Error::Contract(format!("gate {gi} reads {w} = {other:?}"))),
                })
                .collect::<Result<Vec<Lit>>>()?;
            let (ys, cls) = emit_sorter(&ins, g.width(), &mut self.var_count)?;
            for (w, y) in g.outputs.iter().zip(ys) {
                lit_of[w.index()] = Some(OutLit::Lit(y));
            }
            self.stats.gates.add_gate(g.arity(), g.width());
            self.clauses.extend(cls);
        }
        bp.outputs
            .iter()
            .map(|w| lit_of[w.index()].ok_or_else(|| Error::Contract(format!("output {w} undefined"))))
            .collect()
    }

    /// Forces `y` false; returns the number of clauses added.
    fn deny(&mut self, y: OutLit) -> usize {
        match y {
            OutLit::Lit(l) => {
                self.clauses.push(Clause::unit(!l));
                self.stats.unit_clauses += 1;
                1
            }
            OutLit::False => 0,
            OutLit::True => {
                self.falsum("a selection output is constant true".into());
                1
            }
        }
    }

    fn falsum(&mut self, why: String) {
        self.clauses.push(Clause::empty());
        self.stats.falsum_clauses += 1;
        self.diagnostics.push(why);
    }

    fn at_most(&mut self, am: &AtMost, p: &EncodeParams) -> Result<ConstraintNote> {
        let n = am.lits.len();
        let order = am.k + 1;
        let (vars0, clauses0) = (self.var_count, self.clauses.len());
        if p.method == Method::Naive {
            let total = binomial(n, order);
            if total > p.naive_limit {
                return Err(Error::Config(format!(
                    "naive encoding needs {total} clauses, above the limit {}",
                    p.naive_limit
                )));
            }
            for_each_subset(n, order, |idx| {
                self.clauses.push(Clause::new(idx.iter().map(|&i| !am.lits[i]).collect()));
            });
            self.stats.naive_clauses += total as usize;
        } else {
            let bp = build(&p.select(n, order))?;
            let ys = self.network(&bp, &am.lits)?;
            self.deny(ys[order - 1]);
        }
        Ok(ConstraintNote {
            method: p.method.name().to_string(),
            n,
            k: order,
            aux_vars: self.var_count - vars0,
            clauses: self.clauses.len() - clauses0,
        })
    }

    fn finish(self, original_vars: u32, notes: Vec<ConstraintNote>) -> CnfFormula {
        CnfFormula {
            var_count: self.var_count,
            original_vars,
            clauses: self.clauses,
            stats: self.stats,
            notes,
            diagnostics: self.diagnostics,
        }
    }
}

/// Encodes the base clauses and every constraint. At-most-k over L becomes a
/// (k+1)-selection network over L plus the unit clause !y_{k+1}. Original
/// variables keep their numbers; auxiliaries follow in gate order.
pub fn encode(inst: &Instance, p: &EncodeParams) -> Result<CnfFormula> {
    inst.check()?;
    if p.method != Method::Naive {
        // surfaces configuration errors even for constraint-free instances
        p.select(p.method.columns().max(1), 1).check()?;
    }
    let mut e = Emitter::new(inst.var_count);
    e.clauses.extend(inst.clauses.iter().cloned());
    e.stats.base_clauses = inst.clauses.len();
    let mut notes = Vec::new();
    for (ci, c) in inst.constraints.iter().enumerate() {
        for part in normalize_relation(c) {
            match part {
                Normalized::Falsum => e.falsum(format!("constraint {} `{c}` can never hold", ci + 1)),
                Normalized::AtMost(am) => notes.push(e.at_most(&am, p)?),
            }
        }
    }
    Ok(e.finish(inst.var_count, notes))
}

/// A selection network kept around so the bound can be tightened later by
/// appending unit clauses only.
#[derive(Clone, Debug)]
pub struct EncodingHandle {
    pub formula: CnfFormula,
    /// y_1..y_order of the selection network.
    pub outputs: Vec<OutLit>,
    /// Strict bound: at most `bound - 1` literals may be true.
    pub bound: usize,
}

impl EncodingHandle {
    /// Encodes `sum(lits) < bound` with a `bound`-selection network over
    /// fresh variables numbered after `var_count`.
    pub fn new(var_count: u32, lits: &[Lit], bound: usize, p: &EncodeParams) -> Result<Self> {
        if p.method == Method::Naive {
            return Err(Error::Config("naive encoding has no selection outputs".into()));
        }
        if bound == 0 || bound > lits.len() {
            return Err(Error::Shape(format!("bound {bound} outside 1..={}", lits.len())));
        }
        if let Some(l) = lits.iter().find(|l| l.var() > var_count) {
            return Err(Error::Shape(format!("literal {l} exceeds {var_count} variables")));
        }
        let mut e = Emitter::new(var_count);
        let bp = build(&p.select(lits.len(), bound))?;
        let outputs = e.network(&bp, lits)?[..bound].to_vec();
        let before = e.clauses.len();
        e.deny(outputs[bound - 1]);
        let note = ConstraintNote {
            method: p.method.name().to_string(),
            n: lits.len(),
            k: bound,
            aux_vars: e.var_count - var_count,
            clauses: e.clauses.len() - before + e.stats.gates.clauses as usize,
        };
        Ok(EncodingHandle { formula: e.finish(var_count, vec![note]), outputs, bound })
    }

    /// Tightens the bound to `sum < k`; the delta is the single unit !y_k.
    pub fn strengthen(&mut self, k: usize) -> Result<Vec<Clause>> {
        if k >= self.bound {
            return Err(Error::Contract(format!("new bound {k} is not below {}", self.bound)));
        }
        if k == 0 {
            return Err(Error::Contract("bound 0 cannot be expressed by an output".into()));
        }
        let delta = match self.outputs[k - 1] {
            OutLit::Lit(l) => vec![Clause::unit(!l)],
            OutLit::False => Vec::new(),
            OutLit::True => vec![Clause::empty()],
        };
        self.formula.clauses.extend(delta.iter().cloned());
        self.formula.stats.unit_clauses += delta.len();
        self.bound = k;
        Ok(delta)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{CardinalityConstraint, Relation};
    use super::*;

    fn lits(xs: &[i64]) -> Vec<Lit> {
        xs.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect()
    }

    fn clause(xs: &[i64]) -> Clause {
        Clause::new(lits(xs))
    }

    fn single(n: u32, xs: &[i64], rel: Relation, k: u64) -> Instance {
        Instance {
            var_count: n,
            clauses: vec![],
            constraints: vec![CardinalityConstraint::new(lits(xs), rel, k).unwrap()],
        }
    }

    #[test]
    fn sorter_clause_shapes() {
        let mut v = 2;
        let (ys, cls) = emit_sorter(&lits(&[1, 2]), 2, &mut v).unwrap();
        assert_eq!(ys, lits(&[3, 4]));
        assert_eq!(cls, vec![clause(&[-1, 3]), clause(&[-2, 3]), clause(&[-1, -2, 4])]);
        for (a, want) in [(3usize, 7usize), (4, 15)] {
            let ins: Vec<Lit> = (1..=a as u32).map(Lit::pos).collect();
            let mut v = a as u32;
            let (ys, cls) = emit_sorter(&ins, a, &mut v).unwrap();
            assert_eq!((ys.len(), cls.len()), (a, want));
        }
        assert!(emit_sorter(&lits(&[1]), 2, &mut 1).is_err());
    }

    #[test]
    fn max2_encoding() {
        let f = encode(&single(2, &[1, 2], Relation::Lt, 1), &EncodeParams::new(Method::FourOddEven)).unwrap();
        assert_eq!(f.var_count, 4);
        assert_eq!(
            f.clauses,
            vec![clause(&[-1, 3]), clause(&[-2, 3]), clause(&[-1, -2, 4]), clause(&[-3])]
        );
        assert_eq!(f.stats.total_clauses(), 4);
    }

    #[test]
    fn direct_at_most_one_over_four() {
        let f = encode(&single(4, &[1, 2, 3, 4], Relation::Le, 1), &EncodeParams::new(Method::Direct)).unwrap();
        assert_eq!(f.clauses.len(), 11);
        assert_eq!(f.aux_vars(), 2);
    }

    #[test]
    fn naive_counts() {
        let f = encode(&single(5, &[1, 2, 3, 4, 5], Relation::Lt, 2), &EncodeParams::new(Method::Naive)).unwrap();
        assert_eq!((f.clauses.len(), f.aux_vars()), (10, 0));
        let mut p = EncodeParams::new(Method::Naive);
        p.naive_limit = 9;
        assert!(encode(&single(5, &[1, 2, 3, 4, 5], Relation::Lt, 2), &p).is_err());
    }

    #[test]
    fn falsum_is_explicit() {
        let f = encode(&single(2, &[1, 2], Relation::Ge, 3), &EncodeParams::new(Method::Pairwise)).unwrap();
        assert_eq!(f.clauses, vec![Clause::empty()]);
        assert_eq!(f.diagnostics.len(), 1);
    }

    #[test]
    fn stats_match_clause_list() {
        for method in Method::ALL {
            let mut inst = single(9, &[1, 2, 3, 4, 5, 6, 7, 8, 9], Relation::Eq, 3);
            inst.clauses.push(clause(&[1, -2]));
            let f = encode(&inst, &EncodeParams::new(method)).unwrap();
            assert_eq!(f.stats.total_clauses(), f.clauses.len() as u64, "{method}");
            assert!(f.clauses.iter().all(|c| c.max_var() <= f.var_count));
        }
    }

    #[test]
    fn bad_threshold_is_config_error() {
        let p = EncodeParams::new(Method::FourWise).with_base(BaseCase::Direct(2));
        assert!(matches!(encode(&Instance::default(), &p), Err(Error::Config(_))));
    }

    #[test]
    fn strengthening_appends_units() {
        let xs = lits(&[1, 2, 3, 4, 5, 6]);
        let mut h = EncodingHandle::new(6, &xs, 4, &EncodeParams::new(Method::FourOddEven)).unwrap();
        let before = h.formula.clauses.clone();
        let d = h.strengthen(3).unwrap();
        let OutLit::Lit(y3) = h.outputs[2] else { panic!() };
        assert_eq!(d, vec![Clause::unit(!y3)]);
        assert_eq!(&h.formula.clauses[..before.len()], &before[..]);
        assert_eq!(h.strengthen(1).unwrap().len(), 1);
        assert!(h.strengthen(1).is_err());
        assert_eq!(h.formula.stats.total_clauses(), h.formula.clauses.len() as u64);
    }
}
