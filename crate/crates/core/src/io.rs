//! CNFP input and DIMACS output.
//!
//! CNFP grammar, one item per line:
//!
//! ```text
//! c <anything>              comment
//! p cnf+ <vars> <lines>     header, before any item
//! l1 l2 ... 0               clause
//! l1 l2 ... <= k            cardinality constraint (also >=)
//! ```
//!
//! `<lines>` counts clause and constraint lines. Blank lines are ignored.

use std::fmt::Write;

use crate::cnf::{CardinalityConstraint, Clause, CnfFormula, Instance, Lit, Relation};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn int(tok: &str, line: usize) -> Result<i64> {
    tok.parse::<i64>().map_err(|_| parse_err(line, format!("expected an integer, found `{tok}`")))
}

fn lit(x: i64, var_count: u32, line: usize) -> Result<Lit> {
    let l = Lit::from_dimacs(x).ok_or_else(|| parse_err(line, format!("bad literal {x}")))?;
    if l.var() > var_count {
        return Err(Error::Semantic { line, msg: format!("variable {} exceeds declared {var_count}", l.var()) });
    }
    Ok(l)
}

pub fn parse_cnfp(text: &str) -> Result<Instance> {
    let mut header: Option<(u32, usize, usize)> = None;
    let mut inst = Instance::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(&first) = toks.first() else { continue };
        if first.starts_with('c') {
            continue;
        }
        if first == "p" {
            if header.is_some() {
                return Err(parse_err(line, "second header"));
            }
            if toks.len() != 4 || toks[1] != "cnf+" {
                return Err(parse_err(line, "expected `p cnf+ <vars> <lines>`"));
            }
            let vars = toks[2].parse::<u32>().map_err(|_| parse_err(line, "bad variable count"))?;
            let lines = toks[3].parse::<usize>().map_err(|_| parse_err(line, "bad line count"))?;
            header = Some((vars, lines, line));
            inst.var_count = vars;
            continue;
        }
        if header.is_none() {
            return Err(parse_err(line, "item before the `p cnf+` header"));
        }
        let n = toks.len();
        if n >= 2 && matches!(toks[n - 2], "<=" | ">=") {
            let rel = if toks[n - 2] == "<=" { Relation::Le } else { Relation::Ge };
            let k = toks[n - 1]
                .parse::<u64>()
                .map_err(|_| parse_err(line, format!("bound must be a non-negative integer, found `{}`", toks[n - 1])))?;
            if n == 2 {
                return Err(parse_err(line, "constraint without literals"));
            }
            let lits = toks[..n - 2]
                .iter()
                .map(|t| lit(int(t, line)?, inst.var_count, line))
                .collect::<Result<Vec<_>>>()?;
            inst.constraints.push(CardinalityConstraint { lits, rel, k });
        } else {
            let xs = toks.iter().map(|t| int(t, line)).collect::<Result<Vec<_>>>()?;
            match xs.iter().position(|&x| x == 0) {
                Some(p) if p == n - 1 => {}
                Some(_) => return Err(parse_err(line, "`0` before the end of the clause")),
                None => return Err(parse_err(line, "clause not terminated by `0`")),
            }
            let lits = xs[..n - 1]
                .iter()
                .map(|&x| lit(x, inst.var_count, line))
                .collect::<Result<Vec<_>>>()?;
            inst.clauses.push(Clause::new(lits));
        }
    }
    let Some((_, lines, hl)) = header else {
        return Err(parse_err(text.lines().count().max(1), "missing `p cnf+` header"));
    };
    let got = inst.clauses.len() + inst.constraints.len();
    if got != lines {
        return Err(Error::Semantic { line: hl, msg: format!("header declares {lines} lines, found {got}") });
    }
    Ok(inst)
}

/// Canonical CNFP text: header, clauses, then constraints. Relations other
/// than `<=` and `>=` are rewritten into equivalent `<=`/`>=` lines.
pub fn write_cnfp(inst: &Instance) -> String {
    let mut items: Vec<String> = inst.clauses.iter().map(|c| c.to_string()).collect();
    for c in &inst.constraints {
        let body: String = c.lits.iter().map(|l| format!("{l} ")).collect();
        let n = c.lits.len() as u64;
        let mut push = |op: &str, k: u64| items.push(format!("{body}{op} {k}"));
        match c.rel {
            Relation::Le => push("<=", c.k),
            Relation::Ge => push(">=", c.k),
            Relation::Lt if c.k == 0 => push(">=", n + 1),
            Relation::Lt => push("<=", c.k - 1),
            Relation::Gt => push(">=", c.k + 1),
            Relation::Eq => {
                push("<=", c.k);
                push(">=", c.k);
            }
        }
    }
    let mut out = format!("p cnf+ {} {}\n", inst.var_count, items.len());
    for it in items {
        out.push_str(&it);
        out.push('\n');
    }
    out
}

/// DIMACS text: one comment per encoded constraint, header, clauses.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = String::new();
    for n in &f.notes {
        let _ = writeln!(out, "c {n}");
    }
    for d in &f.diagnostics {
        let _ = writeln!(out, "c diagnostic: {d}");
    }
    let _ = writeln!(out, "p cnf {} {}", f.var_count, f.clauses.len());
    for c in &f.clauses {
        for l in c.lits() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

/// Checks that `text` is DIMACS CNF whose header matches the body. Returns
/// (variables, clauses).
pub fn check_dimacs(text: &str) -> Result<(u32, usize)> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None => continue,
            Some(&"c") => {
                if header.is_some() {
                    return Err(parse_err(line, "comment after the header"));
                }
            }
            Some(&"p") => {
                if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                    return Err(parse_err(line, "bad header"));
                }
                let v = toks[2].parse().map_err(|_| parse_err(line, "bad variable count"))?;
                let c = toks[3].parse().map_err(|_| parse_err(line, "bad clause count"))?;
                header = Some((v, c));
            }
            Some(_) => {
                let Some((v, _)) = header else { return Err(parse_err(line, "clause before header")) };
                let xs = toks.iter().map(|t| int(t, line)).collect::<Result<Vec<_>>>()?;
                if xs.last() != Some(&0) || xs[..xs.len() - 1].contains(&0) {
                    return Err(parse_err(line, "clause must end with its only `0`"));
                }
                if xs.iter().any(|x| x.unsigned_abs() > v as u64) {
                    return Err(Error::Semantic { line, msg: "variable out of range".into() });
                }
                clauses += 1;
            }
        }
    }
    let (v, c) = header.ok_or_else(|| parse_err(1, "missing header"))?;
    if c != clauses {
        return Err(Error::Semantic { line: 1, msg: format!("header declares {c} clauses, found {clauses}") });
    }
    Ok((v, clauses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{encode, EncodeParams};
    use crate::constructions::Method;

    #[test]
    fn grammar_instances() {
        let inst = parse_cnfp("p cnf+ 3 2\n1 -2 0\n1 2 3 <= 1\n").unwrap();
        assert_eq!((inst.clauses.len(), inst.constraints.len()), (1, 1));
        assert_eq!(inst.constraints[0].rel, Relation::Le);
        assert_eq!(inst.constraints[0].k, 1);
        let inst = parse_cnfp("p cnf+ 2 1\n-1 -2 >= 1\n").unwrap();
        assert_eq!(inst.constraints[0].lits, vec![Lit::neg(1), Lit::neg(2)]);
        assert_eq!(inst.constraints[0].rel, Relation::Ge);
    }

    #[test]
    fn comments_and_whitespace() {
        let t = "c hello\n\np  cnf+   2 1\nc mid\n  1\t -2   0  \n";
        assert_eq!(parse_cnfp(t).unwrap().clauses.len(), 1);
    }

    #[test]
    fn errors_carry_lines() {
        let cases = [
            ("p cnf 2 1\n1 0\n", 1),
            ("p cnf+ 2 1\n1 2\n", 2),
            ("p cnf+ 2 1\n1 x 0\n", 2),
            ("p cnf+ 2 1\n1 2 <= -1\n", 2),
            ("p cnf+ 2 1\n<= 1\n", 2),
            ("1 0\n", 1),
            ("p cnf+ 2 1\n1 0 2 0\n", 2),
        ];
        for (t, line) in cases {
            match parse_cnfp(t) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{t:?}"),
                other => panic!("{t:?}: {other:?}"),
            }
        }
        assert!(matches!(parse_cnfp("p cnf+ 2 1\n3 0\n"), Err(Error::Semantic { line: 2, .. })));
        assert!(matches!(parse_cnfp("p cnf+ 2 2\n1 0\n"), Err(Error::Semantic { line: 1, .. })));
    }

    #[test]
    fn round_trip() {
        let t = "p cnf+ 4 3\n1 -2 0\n1 2 3 <= 1\n-4 2 >= 2\n";
        assert_eq!(write_cnfp(&parse_cnfp(t).unwrap()), t);
        let with_comments = "c x\np cnf+ 4 3\nc y\n1 -2 0\n1 2 3 <= 1\n-4 2 >= 2\n";
        assert_eq!(write_cnfp(&parse_cnfp(with_comments).unwrap()), t);
    }

    #[test]
    fn dimacs_examples() {
        assert_eq!(write_dimacs(&CnfFormula::default()), "p cnf 0 0\n");
        let f = CnfFormula {
            var_count: 1,
            original_vars: 1,
            clauses: vec![Clause::unit(Lit::neg(1))],
            ..Default::default()
        };
        assert_eq!(write_dimacs(&f), "p cnf 1 1\n-1 0\n");
        let inst = parse_cnfp("p cnf+ 2 1\n1 2 <= 0\n").unwrap();
        let f = encode(&inst, &EncodeParams::new(Method::FourOddEven)).unwrap();
        let d = write_dimacs(&f);
        assert_eq!(d, "c method=4oe n=2 k=1 aux_vars=2 clauses=4\np cnf 4 4\n-1 3 0\n-2 3 0\n-1 -2 4 0\n-3 0\n");
        assert_eq!(check_dimacs(&d).unwrap(), (4, 4));
    }

    #[test]
    fn dimacs_checker_rejects() {
        assert!(check_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(check_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(check_dimacs("1 0\n").is_err());
    }
}
