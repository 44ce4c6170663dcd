//! Partial breaks: the least-number heuristic and transposition minimality.

use std::cmp::Ordering;

use super::perm::{apply_perm, Permutation};
use super::vectorization::Vectorization;
use super::SymmetryError;
use crate::magma::Magma;

/// All `n(n-1)/2` transpositions, `(0 1), (0 2), …, (n-2 n-1)`.
pub fn transposition_set(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(Permutation::transposition(n, a, b));
        }
    }
    out
}

/// Reads the table along `v`; each value may exceed the largest designated
/// number by at most one. Designated: indices of the cells read so far
/// (including the current one) and the values read before it.
pub fn satisfies_lnh(v: &Vectorization, a: &Magma) -> Result<bool, SymmetryError> {
    let values = v.vectorize(a)?;
    let mut designated = 0;
    for (&(r, c), &d) in v.order().iter().zip(&values) {
        designated = designated.max(r).max(c);
        if d > designated + 1 {
            return Ok(false);
        }
        designated = designated.max(d);
    }
    Ok(true)
}

/// The first transposition `τ` (in [`transposition_set`] order) with `τ(A) ≺ A`.
pub fn transposition_witness(v: &Vectorization, a: &Magma) -> Result<Option<Permutation>, SymmetryError> {
    for tau in transposition_set(a.size()) {
        if v.lex_compare(&apply_perm(&tau, a)?, a)? == Ordering::Less {
            return Ok(Some(tau));
        }
    }
    Ok(None)
}

pub fn is_transposition_minimal(v: &Vectorization, a: &Magma) -> Result<bool, SymmetryError> {
    Ok(transposition_witness(v, a)?.is_none())
}
