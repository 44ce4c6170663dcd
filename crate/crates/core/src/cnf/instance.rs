use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Not, Range};

use super::CnfError;

/// A propositional variable, numbered from 1 as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn from_id(id: u32) -> Var {
        assert!(id > 0, "variable ids start at 1");
        Var(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Lit {
        Lit(self.0 as i32)
    }

    pub fn negative(self) -> Lit {
        Lit(-(self.0 as i32))
    }
}

/// A literal in DIMACS convention: positive or negated variable id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct Lit(i32);

impl Lit {
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0 && value != i32::MIN);
        Lit(value)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }

    pub fn var(self) -> Var {
        Var(self.0.unsigned_abs())
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

/// A densely allocated block of variables indexed by a fixed-shape tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    base: u32,
    dims: Vec<usize>,
}

impl Family {
    #[inline]
    pub fn var(&self, indices: &[usize]) -> Var {
        debug_assert_eq!(indices.len(), self.dims.len());
        let mut offset = 0usize;
        for (&i, &d) in indices.iter().zip(&self.dims) {
            debug_assert!(i < d, "index {i} out of range {d}");
            offset = offset * d + i;
        }
        Var(self.base + offset as u32)
    }

    #[inline]
    pub fn lit(&self, indices: &[usize]) -> Lit {
        self.var(indices).positive()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.len() as u32).map(move |o| Var(self.base + o))
    }

    pub fn contains(&self, var: Var) -> bool {
        var.0 >= self.base && ((var.0 - self.base) as usize) < self.len()
    }
}

#[derive(Debug, Clone)]
enum FamilyEntry {
    Dense(Family),
    Sparse(HashMap<Vec<usize>, Var>),
}

/// A named, contiguous range of clauses emitted by one encoder call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGroup {
    pub name: String,
    pub clauses: Range<usize>,
}

/// Clause database with named variable families and a projection set.
#[derive(Debug, Clone, Default)]
pub struct CnfInstance {
    num_vars: u32,
    lits: Vec<Lit>,
    ends: Vec<usize>,
    families: BTreeMap<String, FamilyEntry>,
    projection: Option<BTreeSet<Var>>,
    group_seq: usize,
}

impl CnfInstance {
    pub fn new() -> CnfInstance {
        CnfInstance::default()
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.ends.len()
    }

    pub fn num_literals(&self) -> usize {
        self.lits.len()
    }

    fn alloc(&mut self, count: usize) -> u32 {
        let base = self.num_vars + 1;
        self.num_vars = self
            .num_vars
            .checked_add(count as u32)
            .filter(|&v| v < i32::MAX as u32)
            .expect("variable space exhausted");
        base
    }

    /// Allocates one variable registered under `(family, indices)`.
    pub fn new_var(&mut self, family: &str, indices: &[usize]) -> Result<Var, CnfError> {
        let duplicate = || CnfError::DuplicateAllocation { family: family.to_string(), indices: indices.to_vec() };
        match self.families.get(family) {
            Some(FamilyEntry::Dense(_)) => return Err(duplicate()),
            Some(FamilyEntry::Sparse(map)) if map.contains_key(indices) => return Err(duplicate()),
            _ => {}
        }
        let var = Var(self.alloc(1));
        match self.families.entry(family.to_string()).or_insert_with(|| FamilyEntry::Sparse(HashMap::new())) {
            FamilyEntry::Sparse(map) => {
                map.insert(indices.to_vec(), var);
            }
            FamilyEntry::Dense(_) => unreachable!(),
        }
        Ok(var)
    }

    /// Allocates a dense block with row-major indexing over `dims`.
    pub fn new_family(&mut self, name: &str, dims: &[usize]) -> Result<Family, CnfError> {
        if self.families.contains_key(name) {
            return Err(CnfError::DuplicateFamily(name.to_string()));
        }
        let count: usize = dims.iter().product();
        let base = self.alloc(count);
        let family = Family { base, dims: dims.to_vec() };
        self.families.insert(name.to_string(), FamilyEntry::Dense(family.clone()));
        Ok(family)
    }

    /// Looks up a variable by family name and indices.
    pub fn lookup(&self, family: &str, indices: &[usize]) -> Option<Var> {
        match self.families.get(family)? {
            FamilyEntry::Dense(f) => {
                (indices.len() == f.dims.len() && indices.iter().zip(&f.dims).all(|(i, d)| i < d)).then(|| f.var(indices))
            }
            FamilyEntry::Sparse(map) => map.get(indices).copied(),
        }
    }

    pub fn family(&self, name: &str) -> Option<&Family> {
        match self.families.get(name)? {
            FamilyEntry::Dense(f) => Some(f),
            FamilyEntry::Sparse(_) => None,
        }
    }

    pub fn family_names(&self) -> impl Iterator<Item = &str> {
        self.families.keys().map(String::as_str)
    }

    /// A fresh tag for naming per-call auxiliary families.
    pub fn next_tag(&mut self) -> usize {
        self.group_seq += 1;
        self.group_seq
    }

    /// Adds a clause. Panics on an empty clause or an unallocated variable.
    pub fn add_clause(&mut self, clause: &[Lit]) {
        assert!(!clause.is_empty(), "use add_unsat_marker for the empty clause");
        for lit in clause {
            assert!(lit.var().0 <= self.num_vars, "literal {} references an unallocated variable", lit.0);
        }
        self.lits.extend_from_slice(clause);
        self.ends.push(self.lits.len());
    }

    /// Adds the empty clause, making the instance unsatisfiable.
    pub fn add_unsat_marker(&mut self) {
        self.ends.push(self.lits.len());
    }

    pub fn add_unit(&mut self, lit: Lit) {
        self.add_clause(&[lit]);
    }

    /// Pairwise at-most-one plus an at-least-one clause.
    pub fn exactly_one(&mut self, lits: &[Lit]) {
        self.add_clause(lits);
        self.at_most_one(lits);
    }

    pub fn at_most_one(&mut self, lits: &[Lit]) {
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                self.add_clause(&[!a, !b]);
            }
        }
    }

    pub fn clause(&self, index: usize) -> &[Lit] {
        let start = if index == 0 { 0 } else { self.ends[index - 1] };
        &self.lits[start..self.ends[index]]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[Lit]> {
        (0..self.ends.len()).map(move |i| self.clause(i))
    }

    pub fn group(&self, name: &str, start: usize) -> ClauseGroup {
        ClauseGroup { name: name.to_string(), clauses: start..self.num_clauses() }
    }

    pub fn projection(&self) -> Option<&BTreeSet<Var>> {
        self.projection.as_ref()
    }

    pub fn add_projection(&mut self, vars: impl IntoIterator<Item = Var>) {
        let set = self.projection.get_or_insert_with(BTreeSet::new);
        for v in vars {
            assert!(v.0 <= self.num_vars);
            set.insert(v);
        }
    }

    pub fn clear_projection(&mut self) {
        self.projection = None;
    }

    /// Ensures at least `count` variables exist (used when reading DIMACS).
    pub(crate) fn reserve_vars(&mut self, count: u32) {
        if count > self.num_vars {
            self.num_vars = count;
        }
    }
}

/// A total assignment, indexed by variable id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    values: Vec<bool>,
}

impl Model {
    pub fn from_values(values_by_id: impl IntoIterator<Item = bool>) -> Model {
        let mut values = vec![false];
        values.extend(values_by_id);
        Model { values }
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    #[inline]
    pub fn value(&self, var: Var) -> bool {
        self.values[var.index()]
    }

    #[inline]
    pub fn lit(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    /// Evaluates every clause.
    pub fn satisfies(&self, cnf: &CnfInstance) -> bool {
        self.num_vars() >= cnf.num_vars() && cnf.clauses().all(|c| c.iter().any(|&l| self.lit(l)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_allocation() {
        let mut cnf = CnfInstance::new();
        assert_eq!(cnf.new_var("cell", &[0, 0, 0]).unwrap().id(), 1);
        let mut cnf = CnfInstance::new();
        let cells = cnf.new_family("cell", &[3, 3, 3]).unwrap();
        assert_eq!(cells.var(&[0, 0, 0]).id(), 1);
        assert_eq!(cells.var(&[2, 2, 2]).id(), 27);
        assert_eq!(cnf.new_var("perm", &[2, 1]).unwrap().id(), 28);
    }

    #[test]
    fn duplicate_allocation_rejected() {
        let mut cnf = CnfInstance::new();
        cnf.new_var("cell", &[0, 0, 0]).unwrap();
        assert!(matches!(cnf.new_var("cell", &[0, 0, 0]), Err(CnfError::DuplicateAllocation { .. })));
        cnf.new_family("perm", &[2, 2]).unwrap();
        assert!(cnf.new_var("perm", &[0, 0]).is_err());
        assert!(cnf.new_family("perm", &[2]).is_err());
    }

    #[test]
    fn family_indexing_is_injective() {
        let mut cnf = CnfInstance::new();
        let f = cnf.new_family("f", &[2, 3, 4]).unwrap();
        let mut seen = BTreeSet::new();
        for a in 0..2 {
            for b in 0..3 {
                for c in 0..4 {
                    assert!(seen.insert(f.var(&[a, b, c])));
                    assert_eq!(cnf.lookup("f", &[a, b, c]), Some(f.var(&[a, b, c])));
                }
            }
        }
        assert_eq!(seen.len(), 24);
        assert_eq!(cnf.lookup("f", &[2, 0, 0]), None);
    }

    #[test]
    fn model_checker() {
        let mut cnf = CnfInstance::new();
        let a = cnf.new_var("x", &[0]).unwrap();
        let b = cnf.new_var("x", &[1]).unwrap();
        cnf.add_clause(&[a.positive(), b.positive()]);
        cnf.add_clause(&[a.negative()]);
        assert!(Model::from_values([false, true]).satisfies(&cnf));
        assert!(!Model::from_values([true, true]).satisfies(&cnf));
    }

    #[test]
    #[should_panic]
    fn unallocated_literal_panics() {
        let mut cnf = CnfInstance::new();
        cnf.add_clause(&[Lit::from_dimacs(3)]);
    }
}
