//! The generated header matches the exported symbols and compiles from C.

use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

const SYMBOLS: &[&str] = &[
    "selnet_last_error",
    "selnet_version",
    "selnet_options_default",
    "selnet_string_free",
    "selnet_instance_new",
    "selnet_instance_parse",
    "selnet_instance_free",
    "selnet_instance_add_clause",
    "selnet_instance_add_constraint",
    "selnet_encode",
    "selnet_formula_free",
    "selnet_formula_var_count",
    "selnet_formula_clause_count",
    "selnet_formula_clause",
    "selnet_formula_dimacs",
    "selnet_formula_solve",
    "selnet_handle_new",
    "selnet_handle_free",
    "selnet_handle_bound",
    "selnet_handle_strengthen",
    "selnet_handle_output",
    "selnet_handle_formula",
];

#[test]
fn header_declares_every_symbol() {
    let h = std::fs::read_to_string(manifest().join("include/selnet.h")).unwrap();
    for s in SYMBOLS {
        assert!(h.contains(&format!("{s}(")), "missing {s}");
    }
    for t in ["SELNET_STATUS_OK", "SELNET_BASE_PURE", "SELNET_VERDICT_SAT", "typedef struct SelnetInstance"] {
        assert!(h.contains(t), "missing {t}");
    }
}

fn static_lib() -> Option<PathBuf> {
    // tests/../target/<profile>/deps/<test exe>
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libselnet_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_lib() else {
        eprintln!("static library not found next to the test binary; skipping C link test");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping C link test");
        return;
    }
    let out_dir = std::env::temp_dir().join(format!("selnet-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(manifest().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("vars="));
}
