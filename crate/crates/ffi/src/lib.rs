//! C ABI over the selnet encoder.
//!
//! Conventions:
//! - Every fallible function returns a `SelnetStatus`; `SELNET_STATUS_OK`
//!   is zero. On failure `selnet_last_error()` describes the cause.
//! - Objects are opaque and created through out-pointers. Each has a
//!   matching `_free` function that accepts NULL.
//! - Strings handed out by the library are freed with `selnet_string_free`.
//! - Literals use DIMACS integers: `v` or `-v` for variable `v >= 1`.
//! - Panics never cross the boundary; they surface as `SELNET_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use selnet::cnf::{self, CardinalityConstraint, Clause, CnfFormula, EncodeParams, EncodingHandle, Instance, Lit, OutLit, Relation};
use selnet::constructions::{BaseCase, Method, DEFAULT_DIRECT_LIMIT, DEFAULT_DIRECT_THRESHOLD};
use selnet::io;
use selnet::verify::dpll::{dpll_solve, SolveResult};
use selnet::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelnetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Semantic = 4,
    Config = 5,
    Shape = 6,
    Contract = 7,
    Io = 8,
    Panic = 9,
}

/// Solver outcomes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelnetVerdict {
    Sat = 10,
    Unsat = 20,
    Unknown = 0,
}

/// How recursive constructions bottom out.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelnetBase {
    /// One selector gate for inputs up to `direct_threshold`.
    Direct = 0,
    /// Only the size-4 sorter base case.
    Pure = 1,
    /// No substitution at all.
    Raw = 2,
}

/// Encoder options; start from `selnet_options_default()`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SelnetOptions {
    /// A `SelnetBase` value.
    pub base: u32,
    pub direct_threshold: usize,
    /// Largest input accepted by the `direct` method.
    pub direct_limit: usize,
    /// Largest clause count of one naive encoding.
    pub naive_limit: u64,
}

/// A CNF instance with cardinality constraints.
pub struct SelnetInstance(Instance);

/// An encoded CNF formula.
pub struct SelnetFormula {
    formula: CnfFormula,
    /// Clause literals, each clause terminated by 0.
    flat: Vec<i64>,
    /// Start of each clause in `flat`.
    starts: Vec<usize>,
}

/// A single at-most constraint whose bound can be tightened later.
pub struct SelnetHandle(EncodingHandle);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: SelnetStatus, msg: impl Into<String>) -> SelnetStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> SelnetStatus {
    let status = match &e {
        Error::Parse { .. } => SelnetStatus::Parse,
        Error::Semantic { .. } => SelnetStatus::Semantic,
        Error::Config(_) => SelnetStatus::Config,
        Error::Contract(_) => SelnetStatus::Contract,
        Error::Io(_) => SelnetStatus::Io,
        Error::InputShape { .. } | Error::Degenerate(_) | Error::Shape(_) => SelnetStatus::Shape,
    };
    fail(status, e.to_string())
}

/// Runs `f`, converting panics into `SELNET_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> SelnetStatus) -> SelnetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == SelnetStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(SelnetStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(SelnetStatus::NullPointer, concat!("`", stringify!($p), "` is NULL"));
        })+
    };
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, SelnetStatus> {
    if p.is_null() {
        return Err(fail(SelnetStatus::NullPointer, format!("`{what}` is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SelnetStatus::InvalidArgument, format!("`{what}` is not UTF-8")))
}

unsafe fn lits_from(lits: *const i64, len: usize) -> Result<Vec<Lit>, SelnetStatus> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if lits.is_null() {
        return Err(fail(SelnetStatus::NullPointer, "`lits` is NULL"));
    }
    std::slice::from_raw_parts(lits, len)
        .iter()
        .map(|&x| Lit::from_dimacs(x).ok_or_else(|| fail(SelnetStatus::InvalidArgument, format!("bad literal {x}"))))
        .collect()
}

fn params(method: &str, opts: Option<&SelnetOptions>) -> Result<EncodeParams, SelnetStatus> {
    let method: Method = method.parse().map_err(from_error)?;
    let o = opts.copied().unwrap_or_else(|| selnet_options_default());
    let mut p = EncodeParams::new(method);
    p.base = match o.base {
        b if b == SelnetBase::Direct as u32 => BaseCase::Direct(o.direct_threshold),
        b if b == SelnetBase::Pure as u32 => BaseCase::Pure,
        b if b == SelnetBase::Raw as u32 => BaseCase::Raw,
        b => return Err(fail(SelnetStatus::InvalidArgument, format!("unknown base mode {b}"))),
    };
    p.direct_limit = o.direct_limit;
    p.naive_limit = o.naive_limit;
    Ok(p)
}

fn into_formula(formula: CnfFormula) -> SelnetFormula {
    let mut flat = Vec::new();
    let mut starts = Vec::with_capacity(formula.clauses.len());
    for c in &formula.clauses {
        starts.push(flat.len());
        flat.extend(c.lits().iter().map(|l| l.to_dimacs()));
        flat.push(0);
    }
    SelnetFormula { formula, flat, starts }
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn selnet_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn selnet_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn selnet_options_default() -> SelnetOptions {
    SelnetOptions {
        base: SelnetBase::Direct as u32,
        direct_threshold: DEFAULT_DIRECT_THRESHOLD,
        direct_limit: DEFAULT_DIRECT_LIMIT,
        naive_limit: cnf::DEFAULT_NAIVE_LIMIT,
    }
}

/// Frees a string returned by the library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn selnet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Empty instance over variables 1..=var_count.
#[no_mangle]
pub unsafe extern "C" fn selnet_instance_new(var_count: u32, out: *mut *mut SelnetInstance) -> SelnetStatus {
    guard(|| {
        nonnull!(out);
        let inst = Instance { var_count, ..Default::default() };
        *out = Box::into_raw(Box::new(SelnetInstance(inst)));
        SelnetStatus::Ok
    })
}

/// Parses CNFP text.
#[no_mangle]
pub unsafe extern "C" fn selnet_instance_parse(text: *const c_char, out: *mut *mut SelnetInstance) -> SelnetStatus {
    guard(|| {
        nonnull!(out);
        let text = match c_str(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match io::parse_cnfp(text) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(SelnetInstance(inst)));
                SelnetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn selnet_instance_free(inst: *mut SelnetInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Appends a clause of `len` DIMACS literals.
#[no_mangle]
pub unsafe extern "C" fn selnet_instance_add_clause(inst: *mut SelnetInstance, lits: *const i64, len: usize) -> SelnetStatus {
    guard(|| {
        nonnull!(inst);
        let lits = match lits_from(lits, len) {
            Ok(l) => l,
            Err(s) => return s,
        };
        let inst = &mut (*inst).0;
        if let Some(l) = lits.iter().find(|l| l.var() > inst.var_count) {
            return fail(SelnetStatus::Shape, format!("literal {l} exceeds {} variables", inst.var_count));
        }
        inst.clauses.push(Clause::new(lits));
        SelnetStatus::Ok
    })
}

/// Appends `sum(lits) rel k` where `rel` is one of "<", "<=", "=", ">=", ">".
#[no_mangle]
pub unsafe extern "C" fn selnet_instance_add_constraint(
    inst: *mut SelnetInstance,
    lits: *const i64,
    len: usize,
    rel: *const c_char,
    k: u64,
) -> SelnetStatus {
    guard(|| {
        nonnull!(inst);
        let rel: Relation = match c_str(rel, "rel").map(|r| r.parse::<Relation>()) {
            Ok(Ok(r)) => r,
            Ok(Err(e)) => return fail(SelnetStatus::InvalidArgument, e.to_string()),
            Err(s) => return s,
        };
        let lits = match lits_from(lits, len) {
            Ok(l) => l,
            Err(s) => return s,
        };
        let inst = &mut (*inst).0;
        if let Some(l) = lits.iter().find(|l| l.var() > inst.var_count) {
            return fail(SelnetStatus::Shape, format!("literal {l} exceeds {} variables", inst.var_count));
        }
        match CardinalityConstraint::new(lits, rel, k) {
            Ok(c) => {
                inst.constraints.push(c);
                SelnetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Encodes the instance. `method` is one of "4oe", "4wise", "2oe", "pcn",
/// "direct", "naive"; `opts` may be NULL for defaults.
#[no_mangle]
pub unsafe extern "C" fn selnet_encode(
    inst: *const SelnetInstance,
    method: *const c_char,
    opts: *const SelnetOptions,
    out: *mut *mut SelnetFormula,
) -> SelnetStatus {
    guard(|| {
        nonnull!(inst, out);
        let p = match c_str(method, "method").and_then(|m| params(m, opts.as_ref())) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match cnf::encode(&(*inst).0, &p) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(into_formula(f)));
                SelnetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn selnet_formula_free(f: *mut SelnetFormula) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of variables, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn selnet_formula_var_count(f: *const SelnetFormula) -> u32 {
    f.as_ref().map_or(0, |f| f.formula.var_count)
}

/// Number of clauses, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn selnet_formula_clause_count(f: *const SelnetFormula) -> usize {
    f.as_ref().map_or(0, |f| f.formula.clauses.len())
}

/// Borrows clause `index`: `*lits` points at `*len` literals owned by the
/// formula and followed by a terminating 0.
#[no_mangle]
pub unsafe extern "C" fn selnet_formula_clause(
    f: *const SelnetFormula,
    index: usize,
    lits: *mut *const i64,
    len: *mut usize,
) -> SelnetStatus {
    guard(|| {
        nonnull!(f, lits, len);
        let f = &*f;
        let Some(&start) = f.starts.get(index) else {
            return fail(SelnetStatus::InvalidArgument, format!("clause index {index} out of range"));
        };
        *lits = f.flat.as_ptr().add(start);
        *len = f.formula.clauses[index].len();
        SelnetStatus::Ok
    })
}

/// DIMACS text of the formula; free with `selnet_string_free`.
#[no_mangle]
pub unsafe extern "C" fn selnet_formula_dimacs(f: *const SelnetFormula, out: *mut *mut c_char) -> SelnetStatus {
    guard(|| {
        nonnull!(f, out);
        let text = io::write_dimacs(&(*f).formula);
        *out = CString::new(text).expect("DIMACS has no nul bytes").into_raw();
        SelnetStatus::Ok
    })
}

/// Solves with the built-in DPLL solver (`budget` decisions, 0 for none).
/// When `model` is non-NULL and the verdict is SAT, writes `var_count + 1`
/// bytes: `model[v]` is 1 if variable v is true; `model[0]` is unused.
#[no_mangle]
pub unsafe extern "C" fn selnet_formula_solve(
    f: *const SelnetFormula,
    budget: u64,
    verdict: *mut SelnetVerdict,
    model: *mut u8,
) -> SelnetStatus {
    guard(|| {
        nonnull!(f, verdict);
        let f = &(*f).formula;
        let r = dpll_solve(f, (budget > 0).then_some(budget));
        *verdict = match r {
            SolveResult::Sat(ref m) => {
                if !model.is_null() {
                    for (i, &b) in m.iter().enumerate() {
                        *model.add(i) = u8::from(b);
                    }
                }
                SelnetVerdict::Sat
            }
            SolveResult::Unsat => SelnetVerdict::Unsat,
            SolveResult::BudgetExceeded => SelnetVerdict::Unknown,
        };
        SelnetStatus::Ok
    })
}

/// Encodes `sum(lits) < bound` over variables numbered up to `var_count`,
/// keeping the network outputs so the bound can be tightened later.
#[no_mangle]
pub unsafe extern "C" fn selnet_handle_new(
    var_count: u32,
    lits: *const i64,
    len: usize,
    bound: usize,
    method: *const c_char,
    opts: *const SelnetOptions,
    out: *mut *mut SelnetHandle,
) -> SelnetStatus {
    guard(|| {
        nonnull!(out);
        let p = match c_str(method, "method").and_then(|m| params(m, opts.as_ref())) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let lits = match lits_from(lits, len) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match EncodingHandle::new(var_count, &lits, bound, &p) {
            Ok(h) => {
                *out = Box::into_raw(Box::new(SelnetHandle(h)));
                SelnetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn selnet_handle_free(h: *mut SelnetHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Current strict bound, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn selnet_handle_bound(h: *const SelnetHandle) -> usize {
    h.as_ref().map_or(0, |h| h.0.bound)
}

/// Tightens the bound to `sum < k`. Writes the added unit literal to
/// `*unit`, or 0 when the output is constant and nothing was added.
#[no_mangle]
pub unsafe extern "C" fn selnet_handle_strengthen(h: *mut SelnetHandle, k: usize, unit: *mut i64) -> SelnetStatus {
    guard(|| {
        nonnull!(h, unit);
        let h = &mut (*h).0;
        match h.strengthen(k) {
            Ok(delta) => {
                *unit = delta.first().and_then(|c| c.lits().first()).map_or(0, |l| l.to_dimacs());
                SelnetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Output literal y_i (1-based) of the handle's network, or 0 when that
/// output is constant.
#[no_mangle]
pub unsafe extern "C" fn selnet_handle_output(h: *const SelnetHandle, i: usize, lit: *mut i64) -> SelnetStatus {
    guard(|| {
        nonnull!(h, lit);
        let h = &(*h).0;
        match i.checked_sub(1).and_then(|j| h.outputs.get(j)) {
            Some(OutLit::Lit(l)) => *lit = l.to_dimacs(),
            Some(_) => *lit = 0,
            None => return fail(SelnetStatus::InvalidArgument, format!("output {i} outside 1..={}", h.outputs.len())),
        }
        SelnetStatus::Ok
    })
}

/// Snapshot of the handle's current formula as a new formula object.
#[no_mangle]
pub unsafe extern "C" fn selnet_handle_formula(h: *const SelnetHandle, out: *mut *mut SelnetFormula) -> SelnetStatus {
    guard(|| {
        nonnull!(h, out);
        *out = Box::into_raw(Box::new(into_formula((*h).0.formula.clone())));
        SelnetStatus::Ok
    })
}
