use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::SymmetryError;
use crate::magma::Magma;

/// A bijection on {0..n-1}, stored as its image: `image[i] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = SymmetryError;

    fn try_from(image: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.image
    }
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Permutation, SymmetryError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(SymmetryError::NotBijection(image));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { image: (0..n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    /// Builds from disjoint cycles; `(a b c)` maps a→b→c→a.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Permutation, SymmetryError> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || std::mem::replace(&mut touched[a], true) {
                    return Err(SymmetryError::NotBijection(cycle.to_vec()));
                }
                image[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::new(image)
    }

    /// The cycle `(n-1 n-2 ... 1 0)`.
    pub fn descending_cycle(n: usize) -> Permutation {
        let cycle: Vec<usize> = (0..n).rev().collect();
        Permutation::from_cycles(n, &[&cycle]).expect("valid cycle")
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size());
        Permutation { image: other.image.iter().map(|&i| self.image[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Non-trivial cycles, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for start in 0..self.size() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.image[i];
            }
            out.push(cycle);
        }
        out
    }

    /// All of S_n in lexicographic image order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n).permutations(n).map(|image| Permutation { image })
    }

    /// Parses `p 0 2 1` image notation.
    pub fn parse_image_line(line: &str) -> Result<Permutation, SymmetryError> {
        let rest = line
            .trim()
            .strip_prefix('p')
            .ok_or_else(|| SymmetryError::Parse(format!("expected 'p <images>', got {line:?}")))?;
        let image: Result<Vec<usize>, _> = rest.split_whitespace().map(str::parse).collect();
        Permutation::new(image.map_err(|_| SymmetryError::Parse(format!("bad image line {line:?}")))?)
    }

    pub fn image_line(&self) -> String {
        let mut s = String::from("p");
        for i in &self.image {
            s.push(' ');
            s.push_str(&i.to_string());
        }
        s
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            write!(f, "({})", c.iter().join(" "))?;
        }
        Ok(())
    }
}

/// The isomorphic copy: `result[r][c] = π(a[π⁻¹(r)][π⁻¹(c)])`.
pub fn apply_perm(pi: &Permutation, a: &Magma) -> Result<Magma, SymmetryError> {
    let n = a.size();
    if pi.size() != n {
        return Err(SymmetryError::SizeMismatch(pi.size(), n));
    }
    let inv = pi.inverse();
    Ok(Magma::from_fn(n, |r, c| pi.apply(a.get(inv.apply(r), inv.apply(c)))).expect("permuted values stay in range"))
}

/// Plain-text permutation list: one `p ...` line each, cycle notation as a comment.
pub fn format_permutation_list(perms: &[Permutation]) -> String {
    let mut out = String::new();
    for p in perms {
        out.push_str(&format!("c {p}\n{}\n", p.image_line()));
    }
    out
}

pub fn parse_permutation_list(text: &str) -> Result<Vec<Permutation>, SymmetryError> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'))
        .map(Permutation::parse_image_line)
        .collect()
}
