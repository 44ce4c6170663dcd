//! Permutations, cell orders, lex constraints and partial breaks.

mod encode;
mod graph;
mod partial;
mod perm;
mod vectorization;

use thiserror::Error;

use crate::cnf::CnfError;

pub use encode::{encode_free_perm, encode_leq_fixed, encode_lnh, encode_strict_less_free, LexHandle, PermVars};
pub use graph::{gen_graph_theory, summarize_graph_theory, Graph, GraphTheorySummary};
pub use partial::{is_transposition_minimal, satisfies_lnh, transposition_set, transposition_witness};
pub use perm::{apply_perm, format_permutation_list, parse_permutation_list, Permutation};
pub use vectorization::{lex_compare, vectorize, OrderKind, Vectorization};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("not a bijection: {0:?}")]
    NotBijection(Vec<usize>),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("graph has a self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot decode permutation: {0}")]
    Decode(String),
    #[error(transparent)]
    Cnf(#[from] CnfError),
}
