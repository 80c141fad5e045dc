//! A small self-contained CDCL SAT solver.
//!
//! The solver supports incremental clause addition between calls, solving
//! under assumptions and a per-call conflict budget. It is used as the
//! decision procedure behind every validity and equivalence query in
//! `seqodc`.

mod cnf;
mod lit;
mod solver;

pub use cnf::Cnf;
pub use lit::{Lit, Var};
pub use solver::{SolveResult, Solver, SolverStats};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("unknown variable {0}")]
    UnknownVariable(u32),
    #[error("DIMACS line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}
