//! Finite multiplication tables.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MagmaError {
    #[error("table of size {n} needs {expected} cells, got {got}")]
    Shape { n: usize, expected: usize, got: usize },
    #[error("value {value} out of range for size {n}")]
    Value { n: usize, value: usize },
    #[error("size must be positive")]
    Empty,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("malformed table text: {0}")]
    Parse(String),
}

/// An n×n table over {0..n-1}, stored row-major.
///
/// The derived order compares row-major contents, which is the row-by-row
/// lexicographic order for tables of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Magma {
    n: usize,
    cells: Vec<u8>,
}

impl Magma {
    pub fn new(n: usize, cells: Vec<u8>) -> Result<Magma, MagmaError> {
        if n == 0 {
            return Err(MagmaError::Empty);
        }
        if cells.len() != n * n {
            return Err(MagmaError::Shape { n, expected: n * n, got: cells.len() });
        }
        if let Some(&v) = cells.iter().find(|&&v| v as usize >= n) {
            return Err(MagmaError::Value { n, value: v as usize });
        }
        Ok(Magma { n, cells })
    }

    pub fn constant(n: usize, value: u8) -> Magma {
        assert!((value as usize) < n);
        Magma { n, cells: vec![value; n * n] }
    }

    pub fn from_rows(rows: &[&[u8]]) -> Result<Magma, MagmaError> {
        let n = rows.len();
        let cells: Vec<u8> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Magma::new(n, cells)
    }

    /// Builds the table of `f(r, c)`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Result<Magma, MagmaError> {
        let mut cells = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let v = f(r, c);
                if v >= n {
                    return Err(MagmaError::Value { n, value: v });
                }
                cells.push(v as u8);
            }
        }
        Magma::new(n, cells)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.n + col] as usize
    }

    pub fn set(&mut self, row: usize, col: usize, value: usize) {
        assert!(value < self.n);
        self.cells[row * self.n + col] = value as u8;
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.cells.chunks(self.n)
    }

    /// Parses the text format: `n` on the first line, then `n` rows.
    pub fn parse(text: &str) -> Result<Magma, MagmaError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| MagmaError::Parse("missing size line".into()))?
            .parse()
            .map_err(|_| MagmaError::Parse("size is not an integer".into()))?;
        let mut cells = Vec::with_capacity(n * n);
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| MagmaError::Parse("too few rows".into()))?;
            let row: Result<Vec<u8>, _> = line.split_whitespace().map(str::parse::<u8>).collect();
            let row = row.map_err(|_| MagmaError::Parse(format!("bad row {line:?}")))?;
            if row.len() != n {
                return Err(MagmaError::Parse(format!("row {line:?} has {} entries", row.len())));
            }
            cells.extend(row);
        }
        if lines.next().is_some() {
            return Err(MagmaError::Parse("trailing content".into()));
        }
        Magma::new(n, cells)
    }

    /// Serializes to the text format accepted by [`Magma::parse`].
    pub fn to_text(&self) -> String {
        format!("{}\n{self}", self.n)
    }
}

impl fmt::Display for Magma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Iterates all n^(n²) tables in row-major lexicographic order.
pub fn all_tables(n: usize) -> impl Iterator<Item = Magma> {
    let len = n * n;
    let mut next = Some(vec![0u8; len]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut i = len;
        let mut carried = true;
        while i > 0 && carried {
            i -= 1;
            if (succ[i] as usize) + 1 < n {
                succ[i] += 1;
                carried = false;
            } else {
                succ[i] = 0;
            }
        }
        if !carried {
            next = Some(succ);
        }
        Some(Magma { n, cells: current })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let xor = Magma::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(xor.to_text(), "2\n0 1\n1 0\n");
        assert_eq!(Magma::parse(&xor.to_text()).unwrap(), xor);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Magma::new(2, vec![0, 1, 2, 0]).is_err());
        assert!(Magma::new(2, vec![0, 1, 1]).is_err());
        assert!(Magma::parse("2\n0 1\n").is_err());
        assert!(Magma::parse("2\n0 1 1\n1 0\n").is_err());
    }

    #[test]
    fn enumerates_in_order() {
        let tables: Vec<Magma> = all_tables(2).collect();
        assert_eq!(tables.len(), 16);
        assert!(tables.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all_tables(1).count(), 1);
        assert_eq!(all_tables(3).count(), 19683);
    }
}
