//! Lex-leader symmetry breaking for finite magmas via canonizing sets.

pub mod axiom;
pub mod cnf;
pub mod engine;
pub mod ground;
pub mod magma;
pub mod oracle;
pub mod symmetry;
