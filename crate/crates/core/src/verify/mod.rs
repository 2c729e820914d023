//! Independent oracles: top-k checks, input generators, sweeps, size
//! formulas, unit propagation and a small DPLL solver.

pub mod counts;
pub mod dpll;
pub mod encoding;
pub mod generators;
pub mod sweep;
pub mod topk;
pub mod up;

pub use topk::{brute_force_top_k, is_top_k_sorted, TopKVerdict, Witness};
pub use dpll::{dpll_solve, SolveResult};
pub use up::{unit_propagate, Assignment, UpOutcome};
