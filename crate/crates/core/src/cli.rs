//! Command-line front end. [`run`] returns the process exit status:
//! 0 success, 1 verification or solve failure, 2 usage, parse or
//! configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::cnf::{encode, EncodeParams};
use crate::constructions::{
    build, build_2oe_merge, build_4oe_merge, build_4w_merge, build_pw_merge, BaseCase, Method,
    SelectParams, DEFAULT_DIRECT_LIMIT, DEFAULT_DIRECT_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::io::{check_dimacs, parse_cnfp, write_dimacs};
use crate::network::Blueprint;
use crate::verify::counts::{mirror, theoretical_counts, Tag};
use crate::verify::dpll::{dpll_solve, SolveResult};
use crate::verify::sweep::{exhaustive, sampled, show};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "selnet", version, about = "Cardinality constraints to CNF through selection networks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, Copy)]
struct BaseOpts {
    /// Replace sub-networks on at most N inputs by one selector gate.
    #[arg(long, value_name = "N")]
    direct_threshold: Option<usize>,
    /// Counting mode: only the size-4 sorter base case.
    #[arg(long, conflicts_with = "direct_threshold")]
    pure: bool,
    /// Largest input the `direct` method accepts.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_DIRECT_LIMIT)]
    direct_limit: usize,
}

impl BaseOpts {
    fn base(&self) -> BaseCase {
        if self.pure {
            BaseCase::Pure
        } else {
            BaseCase::Direct(self.direct_threshold.unwrap_or(DEFAULT_DIRECT_THRESHOLD))
        }
    }

    fn encode_params(&self, method: Method) -> EncodeParams {
        let mut p = EncodeParams::new(method).with_base(self.base());
        p.direct_limit = self.direct_limit;
        p
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Encode a CNFP instance as DIMACS CNF.
    Encode {
        #[arg(long)]
        method: Method,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Output file; `-` writes to standard output.
        #[arg(long = "out", value_name = "FILE", default_value = "-")]
        output: PathBuf,
        #[command(flatten)]
        base: BaseOpts,
    },
    /// Check selection networks for every n <= max-n and 1 <= k <= n.
    Verify {
        #[arg(long)]
        method: Method,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sizes above this are sampled instead of enumerated.
        #[arg(long, default_value_t = 12)]
        exhaustive_max: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[command(flatten)]
        base: BaseOpts,
    },
    /// Print counted gates, variables and clauses next to the closed forms.
    Count {
        #[arg(long)]
        method: Method,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Count the method's merger on n inputs instead of the selector.
        #[arg(long)]
        merge: bool,
        #[command(flatten)]
        base: BaseOpts,
    },
    /// Encode and solve a CNFP instance with the built-in DPLL solver.
    Solve {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        /// Give up after this many decisions.
        #[arg(long)]
        budget: Option<u64>,
        /// Also solve the naive encoding and compare verdicts.
        #[arg(long)]
        cross_check: bool,
        #[command(flatten)]
        base: BaseOpts,
    },
    /// Time the encoder on every .cnfp file in a directory.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        method: Method,
        #[command(flatten)]
        base: BaseOpts,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Cmd::Encode { method, input, output, base } => cmd_encode(method, &input, &output, &base, out),
        Cmd::Verify { method, max_n, seed, exhaustive_max, samples, base } => {
            cmd_verify(method, max_n, seed, exhaustive_max, samples, &base, out)
        }
        Cmd::Count { method, n, k, merge, base } => cmd_count(method, n, k, merge, &base, out),
        Cmd::Solve { input, method, budget, cross_check, base } => {
            cmd_solve(&input, method, budget, cross_check, &base, out)
        }
        Cmd::Bench { dir, method, base } => cmd_bench(&dir, method, &base, out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn cmd_encode(method: Method, input: &Path, output: &Path, base: &BaseOpts, out: &mut dyn Write) -> Result<i32> {
    let inst = parse_cnfp(&read(input)?)?;
    let f = encode(&inst, &base.encode_params(method))?;
    let text = write_dimacs(&f);
    if output.as_os_str() == "-" {
        out.write_all(text.as_bytes())?;
    } else {
        fs::write(output, text).map_err(|e| Error::Io(format!("{}: {e}", output.display())))?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    method: Method,
    max_n: usize,
    seed: u64,
    exhaustive_max: usize,
    samples: u64,
    base: &BaseOpts,
    out: &mut dyn Write,
) -> Result<i32> {
    if method == Method::Naive {
        return Err(Error::Config("naive encoding has no network to verify".into()));
    }
    let mut failures = 0;
    let mut cases = 0;
    for n in 1..=max_n {
        for k in 1..=n {
            let mut p = SelectParams::new(method, n, k).with_base(base.base());
            p.direct_limit = base.direct_limit;
            let bp = build(&p)?;
            let (mode, r) = if n <= exhaustive_max {
                ("exhaustive", exhaustive(&bp, k)?)
            } else {
                ("sampled", sampled(&bp, k, samples, seed)?)
            };
            cases += 1;
            if r.ok() {
                writeln!(out, "method={method} n={n} k={k} {mode} checked={} ok", r.checked)?;
            } else {
                failures += 1;
                let w = r.verdict.witness.expect("failing verdict has a witness");
                writeln!(
                    out,
                    "method={method} n={n} k={k} {mode} FAIL input={} output={}",
                    show(&w.input),
                    show(&w.output)
                )?;
            }
        }
    }
    writeln!(out, "summary: {cases} cases, {failures} failures")?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAIL })
}

fn merger(method: Method, n: usize, k: usize) -> Result<Blueprint> {
    match method {
        Method::FourOddEven => {
            let c = n / 4;
            build_4oe_merge([c.min(k); 4], k)
        }
        Method::FourWise => Ok(build_4w_merge(n / 4, k)?.0),
        Method::TwoOddEven => {
            let c = (n / 2).min(k);
            Ok(build_2oe_merge(c, c))
        }
        Method::Pairwise => {
            let c = (n / 2).min(k);
            build_pw_merge(c, c)
        }
        Method::Direct | Method::Naive => Err(Error::Config(format!("{method} has no merger"))),
    }
}

fn tag(t: Tag) -> &'static str {
    match t {
        Tag::Exact => "exact",
        Tag::Approximate => "approx",
        Tag::UpperBound => "bound",
    }
}

fn cmd_count(method: Method, n: usize, k: usize, merge: bool, base: &BaseOpts, out: &mut dyn Write) -> Result<i32> {
    let bp = if merge {
        merger(method, n, k)?
    } else {
        let mut p = SelectParams::new(method, n, k).with_base(base.base());
        p.direct_limit = base.direct_limit;
        build(&p)?
    };
    let r = bp.count_gates();
    let what = if merge { "merge" } else { "sel" };
    writeln!(out, "method={method} {what} n={n} k={k} base={}", if merge { "none".into() } else { base.base().to_string() })?;
    writeln!(out, "actual: {r}")?;
    if !merge && base.pure {
        if let Some(t) = mirror(method, n, k) {
            writeln!(out, "recurrence: comparators={} vars={} clauses={}", t.comparators(), t.variables(), t.clauses())?;
        }
    }
    let formulas = theoretical_counts(n, k);
    let relevant: &[(&str, &str)] = match (method, merge) {
        (Method::TwoOddEven, false) => &[("2oe_sel.comparators", "comparators"), ("2oe_sel.k4.vars", "vars")],
        (Method::FourOddEven, false) => &[("4oe_sel.k4.vars", "vars")],
        (Method::TwoOddEven, true) => &[("2oe_merge.comparators", "comparators")],
        (Method::Pairwise, true) => &[("pw_merge.comparators", "comparators")],
        (Method::FourWise, true) => &[("4w_merge.vars", "vars"), ("4w_merge.clauses", "clauses")],
        (Method::FourOddEven, true) => &[
            ("4oe_merge.b_star", "vars"),
            ("4oe_merge.vars_bound", "vars"),
            ("4oe_merge.clauses_bound", "clauses"),
        ],
        _ => &[],
    };
    for &(name, unit) in relevant {
        if name.contains(".k4.") && k != 4 {
            continue;
        }
        let Some(f) = formulas.iter().find(|f| f.name == name) else { continue };
        let actual = match unit {
            "comparators" => r.gates as u64,
            "vars" => r.variables,
            _ => r.clauses,
        };
        writeln!(
            out,
            "{unit}: actual={actual} theory[{name}]={} ({}{})",
            fmt_num(f.value),
            tag(f.tag),
            if f.on_grid { "" } else { ", off grid" }
        )?;
    }
    Ok(EXIT_OK)
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.2}")
    }
}

fn cmd_solve(
    input: &Path,
    method: Method,
    budget: Option<u64>,
    cross_check: bool,
    base: &BaseOpts,
    out: &mut dyn Write,
) -> Result<i32> {
    let inst = parse_cnfp(&read(input)?)?;
    let f = encode(&inst, &base.encode_params(method))?;
    let verdict = dpll_solve(&f, budget);
    let mut code = EXIT_OK;
    match &verdict {
        SolveResult::Sat(m) => {
            writeln!(out, "s SATISFIABLE")?;
            let vals: Vec<String> = (1..=inst.var_count as usize)
                .map(|v| if m[v] { v.to_string() } else { format!("-{v}") })
                .collect();
            writeln!(out, "v {} 0", vals.join(" "))?;
            if !inst.holds(&m[..=inst.var_count as usize]) {
                writeln!(out, "c model violates the instance")?;
                code = EXIT_FAIL;
            }
        }
        SolveResult::Unsat => writeln!(out, "s UNSATISFIABLE")?,
        SolveResult::BudgetExceeded => {
            writeln!(out, "s UNKNOWN")?;
            code = EXIT_FAIL;
        }
    }
    if cross_check && code == EXIT_OK {
        let naive = encode(&inst, &base.encode_params(Method::Naive))?;
        match dpll_solve(&naive, budget) {
            SolveResult::BudgetExceeded => {
                writeln!(out, "c cross-check: budget exceeded")?;
                code = EXIT_FAIL;
            }
            other if other.is_sat() == verdict.is_sat() => writeln!(out, "c cross-check: agrees with naive")?,
            _ => {
                writeln!(out, "c cross-check: DISAGREES with naive")?;
                code = EXIT_FAIL;
            }
        }
    }
    Ok(code)
}

fn cmd_bench(dir: &Path, method: Method, base: &BaseOpts, out: &mut dyn Write) -> Result<i32> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cnfp"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Io(format!("no .cnfp files in {}", dir.display())));
    }
    writeln!(out, "{:<32} {:>10} {:>12} {:>10} {:>10} {:>8}", "file", "vars", "clauses", "aux", "ms", "dimacs")?;
    let p = base.encode_params(method);
    let mut code = EXIT_OK;
    for path in files {
        let text = read(&path)?;
        let start = Instant::now();
        let inst = parse_cnfp(&text)?;
        let f = encode(&inst, &p)?;
        let dimacs = write_dimacs(&f);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let well_formed = check_dimacs(&dimacs).is_ok_and(|(v, c)| v == f.var_count && c == f.clauses.len());
        if !well_formed {
            code = EXIT_FAIL;
        }
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        writeln!(
            out,
            "{:<32} {:>10} {:>12} {:>10} {:>10.1} {:>8}",
            name,
            f.var_count,
            f.clauses.len(),
            f.aux_vars(),
            ms,
            if well_formed { "ok" } else { "BAD" }
        )?;
    }
    Ok(code)
}
