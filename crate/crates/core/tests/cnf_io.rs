use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;
use selnet::cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use selnet::cnf::{encode, CardinalityConstraint, Clause, EncodeParams, Instance, Lit, Relation};
use selnet::constructions::Method;
use selnet::io::{check_dimacs, parse_cnfp, write_cnfp, write_dimacs};
use selnet::verify::encoding::{arc_consistency, equisat_sweep};

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("selnet-it-{}-{name}", std::process::id()));
    fs::create_dir_all(&d).unwrap();
    d
}

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("selnet").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

#[test]
fn arc_consistency_all_methods_small() {
    for m in Method::ALL {
        for n in 1..=8 {
            for k in 0..n {
                let r = arc_consistency(n, k, &EncodeParams::new(m)).unwrap();
                assert!(r.ok(), "{m}: {:?}", &r.failures[..r.failures.len().min(3)]);
            }
        }
    }
}

#[test]
fn equisat_random_instances() {
    let params: Vec<EncodeParams> = Method::ALL.iter().map(|&m| EncodeParams::new(m)).collect();
    let r = equisat_sweep(200, 99, &params).unwrap();
    assert!(r.ok(), "{:?}", r.failures);
}

#[test]
fn dimacs_is_deterministic() {
    let inst = parse_cnfp("p cnf+ 12 2\n1 -5 9 0\n1 2 3 4 5 6 7 8 9 10 11 12 <= 5\n").unwrap();
    for m in Method::ALL {
        let p = EncodeParams::new(m);
        let a = write_dimacs(&encode(&inst, &p).unwrap());
        let b = write_dimacs(&encode(&inst, &p).unwrap());
        assert_eq!(a, b);
        check_dimacs(&a).unwrap();
    }
}

#[test]
fn cli_encode_solve_roundtrip() {
    let d = scratch("encode");
    let input = d.join("x.cnfp");
    let output = d.join("x.cnf");
    fs::write(&input, "p cnf+ 4 2\n1 2 0\n1 2 3 4 <= 1\n").unwrap();
    let (code, _) = call(&["encode", "--method", "4wise", "--in", input.to_str().unwrap(), "--out", output.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&output).unwrap();
    assert!(text.starts_with("c method=4wise n=4 k=2 "));
    check_dimacs(&text).unwrap();
    let (code, out) = call(&["solve", "--in", input.to_str().unwrap(), "--method", "pcn", "--cross-check"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("s SATISFIABLE") && out.contains("agrees with naive"));
}

#[test]
fn cli_naive_emits_subsets() {
    let d = scratch("naive");
    let input = d.join("x.cnfp");
    fs::write(&input, "p cnf+ 6 1\n1 2 3 4 5 6 <= 2\n").unwrap();
    let (code, out) = call(&["encode", "--method", "naive", "--in", input.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("p cnf 6 20\n"), "{out}");
}

#[test]
fn cli_reports_parse_errors_and_unsat() {
    let d = scratch("errors");
    let bad = d.join("bad.cnfp");
    fs::write(&bad, "p cnf+ 2 1\n1 2 <= x\n").unwrap();
    let (code, out) = call(&["encode", "--method", "4oe", "--in", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.contains("line 2"), "{out}");
    let unsat = d.join("unsat.cnfp");
    fs::write(&unsat, "p cnf+ 5 2\n1 2 3 4 5 >= 3\n1 2 3 4 5 <= 2\n").unwrap();
    let (code, out) = call(&["solve", "--in", unsat.to_str().unwrap(), "--method", "4oe"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("s UNSATISFIABLE"));
    let (code, _) = call(&["solve", "--in", unsat.to_str().unwrap(), "--method", "naive", "--budget", "1"]);
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn cli_bench_table() {
    let d = scratch("bench");
    fs::write(d.join("a.cnfp"), "p cnf+ 30 1\n".to_string() + &(1..=30).map(|i| format!("{i} ")).collect::<String>() + "<= 4\n").unwrap();
    let (code, out) = call(&["bench", "--dir", d.to_str().unwrap(), "--method", "4oe"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().nth(1).unwrap().trim_end().ends_with("ok"), "{out}");
}

fn instance_strategy() -> impl Strategy<Value = Instance> {
    (1u32..10).prop_flat_map(|n| {
        let lit = (1..=n, any::<bool>()).prop_map(|(v, s)| if s { Lit::pos(v) } else { Lit::neg(v) });
        let clause = prop::collection::vec(lit.clone(), 0..4).prop_map(Clause::new);
        let rel = prop::sample::select(vec![Relation::Le, Relation::Ge]);
        let cons = (prop::collection::vec(lit, 1..6), rel, 0u64..8)
            .prop_map(|(lits, rel, k)| CardinalityConstraint { lits, rel, k });
        (prop::collection::vec(clause, 0..4), prop::collection::vec(cons, 0..4))
            .prop_map(move |(clauses, constraints)| Instance { var_count: n, clauses, constraints })
    })
}

proptest! {
    #[test]
    fn cnfp_round_trip(inst in instance_strategy()) {
        let text = write_cnfp(&inst);
        let back = parse_cnfp(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_cnfp(&back), text);
    }
}
