use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::perm::{apply_perm, Permutation};
use super::SymmetryError;
use crate::magma::Magma;

/// Which fixed linear order of cells the lex comparison reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    /// Rows left to right, top down.
    Row,
    /// The diagonal first, then row by row skipping it.
    Diagonal,
    /// Square shells of growing `max(row, col)`, each row by row.
    Concentric,
}

impl OrderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OrderKind::Row => "row",
            OrderKind::Diagonal => "diagonal",
            OrderKind::Concentric => "concentric",
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderKind {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "row" | "rows" => Ok(OrderKind::Row),
            "diag" | "diagonal" => Ok(OrderKind::Diagonal),
            "concentric" | "conc" => Ok(OrderKind::Concentric),
            other => Err(SymmetryError::Parse(format!("unknown ordering {other:?}"))),
        }
    }
}

/// A fixed sequence of all n² cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vectorization {
    kind: OrderKind,
    n: usize,
    order: Vec<(usize, usize)>,
}

impl Vectorization {
    pub fn new(kind: OrderKind, n: usize) -> Vectorization {
        let row_major = (0..n).flat_map(|r| (0..n).map(move |c| (r, c)));
        let order: Vec<(usize, usize)> = match kind {
            OrderKind::Row => row_major.collect(),
            OrderKind::Diagonal => (0..n).map(|i| (i, i)).chain(row_major.filter(|(r, c)| r != c)).collect(),
            OrderKind::Concentric => {
                let mut cells: Vec<(usize, usize)> = row_major.collect();
                cells.sort_by_key(|&(r, c)| (r.max(c), r, c));
                cells
            }
        };
        Vectorization { kind, n, order }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    fn check(&self, a: &Magma) -> Result<(), SymmetryError> {
        if a.size() != self.n {
            return Err(SymmetryError::SizeMismatch(self.n, a.size()));
        }
        Ok(())
    }

    pub fn vectorize(&self, a: &Magma) -> Result<Vec<usize>, SymmetryError> {
        self.check(a)?;
        Ok(self.order.iter().map(|&(r, c)| a.get(r, c)).collect())
    }

    pub fn lex_compare(&self, a: &Magma, b: &Magma) -> Result<Ordering, SymmetryError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.order.iter().map(|&(r, c)| a.get(r, c)).cmp(self.order.iter().map(|&(r, c)| b.get(r, c))))
    }

    /// `A ⪯ π(A)` for every `π` in `perms`.
    pub fn is_min_under<'p>(&self, a: &Magma, perms: impl IntoIterator<Item = &'p Permutation>) -> Result<bool, SymmetryError> {
        for p in perms {
            if self.lex_compare(a, &apply_perm(p, a)?)? == Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Minimal in its orbit under all of S_n.
    pub fn is_lex_leader(&self, a: &Magma) -> Result<bool, SymmetryError> {
        self.check(a)?;
        for p in Permutation::all(self.n) {
            if self.lex_compare(a, &apply_perm(&p, a)?)? == Ordering::Greater {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn vectorize(v: &Vectorization, a: &Magma) -> Result<Vec<usize>, SymmetryError> {
    v.vectorize(a)
}

pub fn lex_compare(v: &Vectorization, a: &Magma, b: &Magma) -> Result<Ordering, SymmetryError> {
    v.lex_compare(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> Magma {
        Magma::from_rows(&[&[0, 1], &[1, 0]]).unwrap()
    }

    fn mod3() -> Magma {
        Magma::from_fn(3, |r, c| (r + c) % 3).unwrap()
    }

    #[test]
    fn xor_vectors() {
        assert_eq!(Vectorization::new(OrderKind::Row, 2).vectorize(&xor()).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(Vectorization::new(OrderKind::Concentric, 2).vectorize(&xor()).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(Vectorization::new(OrderKind::Diagonal, 2).vectorize(&xor()).unwrap(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn mod3_vectors() {
        let a = mod3();
        assert_eq!(Vectorization::new(OrderKind::Row, 3).vectorize(&a).unwrap(), vec![0, 1, 2, 1, 2, 0, 2, 0, 1]);
        assert_eq!(Vectorization::new(OrderKind::Concentric, 3).vectorize(&a).unwrap(), vec![0, 1, 1, 2, 2, 0, 2, 0, 1]);
        assert_eq!(Vectorization::new(OrderKind::Diagonal, 3).vectorize(&a).unwrap(), vec![0, 2, 1, 1, 2, 1, 0, 2, 0]);
    }

    #[test]
    fn orders_are_permutations_of_cells() {
        for kind in [OrderKind::Row, OrderKind::Diagonal, OrderKind::Concentric] {
            for n in 1..6 {
                let mut cells = Vectorization::new(kind, n).order().to_vec();
                cells.sort();
                let all: Vec<_> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).collect();
                assert_eq!(cells, all);
            }
        }
    }

    #[test]
    fn comparisons() {
        let v = Vectorization::new(OrderKind::Row, 4);
        let mut a = Magma::constant(4, 0);
        a.set(3, 3, 2);
        let tau_a = apply_perm(&Permutation::transposition(4, 1, 2), &a).unwrap();
        assert_eq!(v.lex_compare(&tau_a, &a).unwrap(), Ordering::Less);
        assert_eq!(v.lex_compare(&a, &a).unwrap(), Ordering::Equal);
        assert_eq!(v.lex_compare(&Magma::constant(4, 0), &a).unwrap(), Ordering::Less);
        assert!(v.lex_compare(&a, &xor()).is_err());
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("diag".parse::<OrderKind>().unwrap(), OrderKind::Diagonal);
        assert_eq!("row".parse::<OrderKind>().unwrap(), OrderKind::Row);
        assert!("spiral".parse::<OrderKind>().is_err());
    }
}
