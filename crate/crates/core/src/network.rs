//! Gate-graph representation of generalized comparator networks.
//!
//! A [`Blueprint`] is a list of m-sorter gates over dense wire ids. Constant
//! wires stand in for the padding element that sorts below everything
//! (`False`) or above everything (`True`). The builder normalizes constants
//! away at construction time so that no gate ever reads a constant.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on gate arity.
pub const DEFAULT_MAX_ARITY: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wire(pub u32);

impl Wire {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WireKind {
    Input(usize),
    GateOutput { gate: usize, slot: usize },
    False,
    True,
}

/// An m-sorter. `outputs[p]` carries the (p+1)-th largest input. When
/// `outputs.len() < inputs.len()` the gate is a truncated selector that only
/// exposes the top outputs (used by the direct base case).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SorterGate {
    pub inputs: Vec<Wire>,
    pub outputs: Vec<Wire>,
}

impl SorterGate {
    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn width(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_truncated(&self) -> bool {
        self.outputs.len() < self.inputs.len()
    }

    /// Number of clauses the standard encoding emits: one per (p, p-subset).
    pub fn clause_count(&self) -> u64 {
        (1..=self.width()).map(|p| binomial(self.arity(), p)).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Meta {
    pub method: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub base: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blueprint {
    pub n_inputs: usize,
    pub wires: Vec<WireKind>,
    pub gates: Vec<SorterGate>,
    pub outputs: Vec<Wire>,
    pub max_arity: usize,
    pub meta: Meta,
}

/// Gate tallies split by (arity, width). Full sorters have arity == width.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountReport {
    pub by_shape: BTreeMap<(usize, usize), usize>,
    pub gates: usize,
    pub variables: u64,
    pub clauses: u64,
}

impl CountReport {
    pub fn add_gate(&mut self, arity: usize, width: usize) {
        *self.by_shape.entry((arity, width)).or_default() += 1;
        self.gates += 1;
        self.variables += width as u64;
        self.clauses += (1..=width).map(|p| binomial(arity, p)).sum::<u64>();
    }

    /// Number of full sorters of the given arity.
    pub fn sorters(&self, arity: usize) -> usize {
        self.by_shape.get(&(arity, arity)).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &CountReport) {
        for (&shape, &c) in &other.by_shape {
            *self.by_shape.entry(shape).or_default() += c;
        }
        self.gates += other.gates;
        self.variables += other.variables;
        self.clauses += other.clauses;
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gates={} vars={} clauses={}", self.gates, self.variables, self.clauses)?;
        for (&(a, w), &c) in &self.by_shape {
            if a == w {
                write!(f, " sort{a}={c}")?;
            } else {
                write!(f, " sel{a}x{w}={c}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownWire { gate: usize, wire: Wire },
    NotYetDefined { gate: usize, wire: Wire },
    ConstantInput { gate: usize, wire: Wire },
    DuplicateInput { gate: usize, wire: Wire },
    OutputReused { gate: usize, wire: Wire },
    OutputKindMismatch { gate: usize, wire: Wire },
    ArityTooLarge { gate: usize, arity: usize, cap: usize },
    ArityTooSmall { gate: usize, arity: usize },
    BadWidth { gate: usize, width: usize },
    BadInputWire { wire: Wire },
    UnknownOutput { wire: Wire },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownWire { gate, wire } => write!(f, "gate {gate} reads unknown wire {wire}"),
            Violation::NotYetDefined { gate, wire } => {
                write!(f, "gate {gate} reads {wire} before it is defined")
            }
            Violation::ConstantInput { gate, wire } => {
                write!(f, "gate {gate} reads constant wire {wire}")
            }
            Violation::DuplicateInput { gate, wire } => {
                write!(f, "gate {gate} reads {wire} more than once")
            }
            Violation::OutputReused { gate, wire } => {
                write!(f, "gate {gate} writes {wire} which is already defined")
            }
            Violation::OutputKindMismatch { gate, wire } => {
                write!(f, "gate {gate} output {wire} is not registered as its output")
            }
            Violation::ArityTooLarge { gate, arity, cap } => {
                write!(f, "gate {gate} has arity {arity} above cap {cap}")
            }
            Violation::ArityTooSmall { gate, arity } => write!(f, "gate {gate} has arity {arity}"),
            Violation::BadWidth { gate, width } => write!(f, "gate {gate} has width {width}"),
            Violation::BadInputWire { wire } => write!(f, "input wire {wire} is mislabelled"),
            Violation::UnknownOutput { wire } => write!(f, "output {wire} is not a wire"),
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

impl Blueprint {
    pub fn kind(&self, w: Wire) -> WireKind {
        self.wires[w.index()]
    }

    pub fn input_wire(&self, pos: usize) -> Wire {
        Wire(pos as u32)
    }

    /// True when every gate is a full sorter, so the whole output is a
    /// permutation of the input.
    pub fn is_complete(&self) -> bool {
        self.gates.iter().all(|g| !g.is_truncated())
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.n_inputs {
            return Err(Error::InputShape { expected: self.n_inputs, got: x.len() });
        }
        let mut val = vec![false; self.wires.len()];
        for (i, kind) in self.wires.iter().enumerate() {
            match kind {
                WireKind::Input(p) => val[i] = x[*p],
                WireKind::True => val[i] = true,
                _ => {}
            }
        }
        for g in &self.gates {
            let ones = g.inputs.iter().filter(|w| val[w.index()]).count();
            for (p, o) in g.outputs.iter().enumerate() {
                val[o.index()] = p < ones;
            }
        }
        Ok(self.outputs.iter().map(|w| val[w.index()]).collect())
    }

    /// Evaluates 64 inputs at once. `lanes[i]` holds bit `l` of input `i` for
    /// lane `l`.
    pub fn evaluate_lanes(&self, lanes: &[u64]) -> Result<Vec<u64>> {
        if lanes.len() != self.n_inputs {
            return Err(Error::InputShape { expected: self.n_inputs, got: lanes.len() });
        }
        let mut val = vec![0u64; self.wires.len()];
        for (i, kind) in self.wires.iter().enumerate() {
            match kind {
                WireKind::Input(p) => val[i] = lanes[*p],
                WireKind::True => val[i] = !0,
                _ => {}
            }
        }
        let mut t = Vec::new();
        for g in &self.gates {
            if g.inputs.len() == 2 {
                let a = val[g.inputs[0].index()];
                let b = val[g.inputs[1].index()];
                val[g.outputs[0].index()] = a | b;
                if g.outputs.len() > 1 {
                    val[g.outputs[1].index()] = a & b;
                }
                continue;
            }
            // t[p] = "at least p of the inputs seen so far are 1"
            let w = g.outputs.len();
            t.clear();
            t.resize(w + 1, 0u64);
            t[0] = !0;
            for (seen, wi) in g.inputs.iter().enumerate() {
                let v = val[wi.index()];
                for p in (1..=w.min(seen + 1)).rev() {
                    t[p] |= t[p - 1] & v;
                }
            }
            for (p, o) in g.outputs.iter().enumerate() {
                val[o.index()] = t[p + 1];
            }
        }
        Ok(self.outputs.iter().map(|w| val[w.index()]).collect())
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut v = Vec::new();
        let nw = self.wires.len();
        let mut defined = vec![false; nw];
        for (i, kind) in self.wires.iter().enumerate() {
            match kind {
                WireKind::Input(p) => {
                    if *p != i || i >= self.n_inputs {
                        v.push(Violation::BadInputWire { wire: Wire(i as u32) });
                    }
                    defined[i] = true;
                }
                WireKind::False | WireKind::True => defined[i] = true,
                WireKind::GateOutput { .. } => {}
            }
        }
        for (gi, g) in self.gates.iter().enumerate() {
            if g.arity() < 2 {
                v.push(Violation::ArityTooSmall { gate: gi, arity: g.arity() });
            }
            if g.arity() > self.max_arity {
                v.push(Violation::ArityTooLarge { gate: gi, arity: g.arity(), cap: self.max_arity });
            }
            if g.width() == 0 || g.width() > g.arity() {
                v.push(Violation::BadWidth { gate: gi, width: g.width() });
            }
            let mut seen = Vec::with_capacity(g.inputs.len());
            for &w in &g.inputs {
                if w.index() >= nw {
                    v.push(Violation::UnknownWire { gate: gi, wire: w });
                    continue;
                }
                if seen.contains(&w) {
                    v.push(Violation::DuplicateInput { gate: gi, wire: w });
                }
                seen.push(w);
                match self.wires[w.index()] {
                    WireKind::False | WireKind::True => {
                        v.push(Violation::ConstantInput { gate: gi, wire: w })
                    }
                    _ if !defined[w.index()] => v.push(Violation::NotYetDefined { gate: gi, wire: w }),
                    _ => {}
                }
            }
            for (slot, &w) in g.outputs.iter().enumerate() {
                if w.index() >= nw {
                    v.push(Violation::UnknownWire { gate: gi, wire: w });
                    continue;
                }
                if defined[w.index()] {
                    v.push(Violation::OutputReused { gate: gi, wire: w });
                }
                if self.wires[w.index()] != (WireKind::GateOutput { gate: gi, slot }) {
                    v.push(Violation::OutputKindMismatch { gate: gi, wire: w });
                }
                defined[w.index()] = true;
            }
        }
        for &w in &self.outputs {
            if w.index() >= nw {
                v.push(Violation::UnknownOutput { wire: w });
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    pub fn count_gates(&self) -> CountReport {
        count_range(&self.gates)
    }
}

pub fn count_range(gates: &[SorterGate]) -> CountReport {
    let mut r = CountReport::default();
    for g in gates {
        r.add_gate(g.arity(), g.width());
    }
    r
}

/// Incremental blueprint construction with constant normalization.
#[derive(Clone, Debug)]
pub struct NetworkBuilder {
    n_inputs: usize,
    wires: Vec<WireKind>,
    gates: Vec<SorterGate>,
    false_wire: Option<Wire>,
    true_wire: Option<Wire>,
    max_arity: usize,
}

impl NetworkBuilder {
    pub fn new(n_inputs: usize) -> Self {
        Self::with_max_arity(n_inputs, DEFAULT_MAX_ARITY)
    }

    pub fn with_max_arity(n_inputs: usize, max_arity: usize) -> Self {
        NetworkBuilder {
            n_inputs,
            wires: (0..n_inputs).map(WireKind::Input).collect(),
            gates: Vec::new(),
            false_wire: None,
            true_wire: None,
            max_arity,
        }
    }

    pub fn inputs(&self) -> Vec<Wire> {
        (0..self.n_inputs as u32).map(Wire).collect()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn set_max_arity(&mut self, cap: usize) {
        self.max_arity = cap;
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[SorterGate] {
        &self.gates
    }

    fn fresh(&mut self, kind: WireKind) -> Wire {
        let w = Wire(self.wires.len() as u32);
        self.wires.push(kind);
        w
    }

    pub fn bottom(&mut self) -> Wire {
        match self.false_wire {
            Some(w) => w,
            None => {
                let w = self.fresh(WireKind::False);
                self.false_wire = Some(w);
                w
            }
        }
    }

    pub fn top(&mut self) -> Wire {
        match self.true_wire {
            Some(w) => w,
            None => {
                let w = self.fresh(WireKind::True);
                self.true_wire = Some(w);
                w
            }
        }
    }

    pub fn is_const(&self, w: Wire) -> bool {
        matches!(self.wires[w.index()], WireKind::False | WireKind::True)
    }

    pub fn is_bottom(&self, w: Wire) -> bool {
        matches!(self.wires[w.index()], WireKind::False)
    }

    /// Sorts `inputs` non-increasingly and returns the output wires. Constant
    /// inputs are moved to the ends; only the remaining wires get a gate.
    pub fn sort(&mut self, inputs: &[Wire]) -> Vec<Wire> {
        self.select(inputs, inputs.len())
    }

    /// Like [`sort`](Self::sort) but only the top `width` outputs are produced
    /// by the gate; the result still has `inputs.len()` entries, the tail
    /// being constant false. Callers that truncate must not read the tail.
    pub fn select(&mut self, inputs: &[Wire], width: usize) -> Vec<Wire> {
        let mut trues = 0;
        let mut falses = 0;
        let mut real = Vec::with_capacity(inputs.len());
        for &w in inputs {
            match self.wires[w.index()] {
                WireKind::True => trues += 1,
                WireKind::False => falses += 1,
                _ => real.push(w),
            }
        }
        let mut out = Vec::with_capacity(inputs.len());
        if trues > 0 {
            let t = self.top();
            out.extend(std::iter::repeat_n(t, trues));
        }
        let want = width.saturating_sub(trues).min(real.len());
        if real.len() <= 1 || want == 0 {
            // already in place, or nothing of the real part is visible
            out.extend(real.iter().copied());
        } else {
            let gi = self.gates.len();
            let outs: Vec<Wire> = (0..want)
                .map(|slot| self.fresh(WireKind::GateOutput { gate: gi, slot }))
                .collect();
            out.extend(outs.iter().copied());
            self.gates.push(SorterGate { inputs: real.clone(), outputs: outs });
            if want < real.len() {
                let b = self.bottom();
                out.extend(std::iter::repeat_n(b, real.len() - want));
            }
        }
        if falses > 0 {
            let b = self.bottom();
            out.extend(std::iter::repeat_n(b, falses));
        }
        out
    }

    /// Sorts the wires behind the given slots in place: the first slot gets
    /// the largest value.
    pub fn sort_slots(&mut self, slots: &mut [&mut Wire]) {
        let ins: Vec<Wire> = slots.iter().map(|w| **w).collect();
        let outs = self.sort(&ins);
        for (s, o) in slots.iter_mut().zip(outs) {
            **s = o;
        }
    }

    /// Sorts `seq[i]` and `seq[j]` (i before j) in place.
    pub fn sort_pair(&mut self, seq: &mut [Wire], i: usize, j: usize) {
        let outs = self.sort(&[seq[i], seq[j]]);
        seq[i] = outs[0];
        seq[j] = outs[1];
    }

    pub fn finish(self, outputs: Vec<Wire>, meta: Meta) -> Blueprint {
        Blueprint {
            n_inputs: self.n_inputs,
            wires: self.wires,
            gates: self.gates,
            outputs,
            max_arity: self.max_arity,
            meta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(arity: usize) -> Blueprint {
        let mut b = NetworkBuilder::new(arity);
        let ins = b.inputs();
        let out = b.sort(&ins);
        b.finish(out, Meta::default())
    }

    #[test]
    fn two_sorter_semantics() {
        let bp = single(2);
        assert_eq!(bp.evaluate(&[false, true]).unwrap(), vec![true, false]);
        let r = bp.count_gates();
        assert_eq!((r.variables, r.clauses), (2, 3));
    }

    #[test]
    fn four_sorter_semantics() {
        let bp = single(4);
        assert_eq!(
            bp.evaluate(&[false, true, false, true]).unwrap(),
            vec![true, true, false, false]
        );
        let r = bp.count_gates();
        assert_eq!((r.variables, r.clauses), (4, 15));
        assert_eq!(single(3).count_gates().clauses, 7);
    }

    #[test]
    fn shape_error() {
        let bp = single(3);
        assert_eq!(
            bp.evaluate(&[true]),
            Err(Error::InputShape { expected: 3, got: 1 })
        );
    }

    #[test]
    fn constants_are_normalized() {
        let mut b = NetworkBuilder::new(2);
        let ins = b.inputs();
        let f = b.bottom();
        let t = b.top();
        let out = b.sort(&[f, ins[0], t, ins[1]]);
        assert_eq!(b.gate_count(), 1);
        assert_eq!(b.gates()[0].arity(), 2);
        assert!(b.is_const(out[0]) && !b.is_bottom(out[0]));
        assert!(b.is_bottom(out[3]));
        // one real wire: no gate at all
        let out2 = b.sort(&[f, ins[0]]);
        assert_eq!(b.gate_count(), 1);
        assert_eq!(out2, vec![ins[0], f]);
    }

    #[test]
    fn lanes_match_scalar() {
        let mut b = NetworkBuilder::new(5);
        let ins = b.inputs();
        let s = b.sort(&ins[..4]);
        let t = b.select(&[s[1], s[2], ins[4]], 2);
        let mut out = vec![s[0]];
        out.extend(&t[..2]);
        let bp = b.finish(out, Meta::default());
        for v in 0u64..32 {
            let x: Vec<bool> = (0..5).map(|i| v >> i & 1 == 1).collect();
            let lanes: Vec<u64> = x.iter().map(|&b| if b { 1 } else { 0 }).collect();
            let scalar = bp.evaluate(&x).unwrap();
            let wide = bp.evaluate_lanes(&lanes).unwrap();
            let wide: Vec<bool> = wide.iter().map(|w| w & 1 == 1).collect();
            assert_eq!(scalar, wide);
        }
    }

    #[test]
    fn validate_catches_order_and_freshness() {
        let mut bp = single(2);
        assert!(bp.validate().is_ok());
        // gate reading a wire defined later
        let mut b = NetworkBuilder::new(3);
        let ins = b.inputs();
        let s = b.sort(&ins[..2]);
        b.sort(&[s[0], ins[2]]);
        let mut late = b.finish(vec![], Meta::default());
        late.gates.swap(0, 1);
        let errs = late.validate().unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, Violation::NotYetDefined { .. })));
        // two gates sharing an output wire
        let g = bp.gates[0].clone();
        bp.gates.push(SorterGate { inputs: vec![Wire(0), Wire(1)], outputs: g.outputs });
        let errs = bp.validate().unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, Violation::OutputReused { .. })));
    }

    #[test]
    fn validate_rejects_duplicates_and_arity() {
        let mut bp = single(2);
        bp.gates[0].inputs = vec![Wire(0), Wire(0)];
        assert!(bp
            .validate()
            .unwrap_err()
            .contains(&Violation::DuplicateInput { gate: 0, wire: Wire(0) }));
        let mut b = NetworkBuilder::with_max_arity(5, 5);
        let ins = b.inputs();
        let out = b.sort(&ins);
        let mut bp = b.finish(out, Meta::default());
        assert!(bp.validate().is_ok());
        bp.max_arity = 4;
        assert!(matches!(bp.validate().unwrap_err()[0], Violation::ArityTooLarge { .. }));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(30, 15), 155117520);
    }
}
