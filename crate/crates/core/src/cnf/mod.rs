//! Variable management, clause storage, DIMACS and SAT backends.

mod backend;
mod dimacs;
mod instance;
pub mod process;

use thiserror::Error;

pub use backend::{
    parse_solver_output, select_backend, solve, BundledSolver, Capabilities, CountOutcome, ExternalSolver, SatBackend,
    SolveResult,
};
pub use dimacs::{emit_dimacs, emit_projection_sidecar, parse_dimacs, write_dimacs};
pub use instance::{ClauseGroup, CnfInstance, Family, Lit, Model, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("variable {family}{indices:?} already allocated")]
    DuplicateAllocation { family: String, indices: Vec<usize> },
    #[error("family {0:?} already exists")]
    DuplicateFamily(String),
    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// Timeout, memory exhaustion or a killed solver process.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("backend failure: {0}")]
    Backend(String),
    #[error("instance contains the empty clause")]
    Trivial,
}
