//! Grounding of theories over {0..n-1} into one-hot CNF.
//!
//! Each distinct non-variable subterm of a clause gets an enumerated value;
//! the ground clause for one choice of variable and subterm values is the
//! disjunction of the negated definitions of those subterms together with
//! the literal atoms. Where a literal side occurs exactly once in its clause
//! it is kept as a positive (or negative) atom instead of being enumerated.

use std::collections::HashMap;

use thiserror::Error;

use crate::axiom::{AxiomSet, Term};
use crate::cnf::{ClauseGroup, CnfError, CnfInstance, Family, Lit, Model};
use crate::magma::Magma;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroundError {
    #[error("domain size must be at least 1")]
    ZeroSize,
    #[error("domain size {0} exceeds the supported maximum of 255")]
    TooLarge(usize),
    #[error("axiom references undeclared constant {0:?}")]
    UndeclaredConstant(String),
    #[error("cell ({row},{col}) has {count} true values")]
    NotOneHot { row: usize, col: usize, count: usize },
    #[error(transparent)]
    Cnf(#[from] CnfError),
}

/// The one-hot variable families describing one interpretation.
#[derive(Debug, Clone)]
pub struct TableVars {
    pub n: usize,
    /// `cell[r, c, v]` is true iff `r*c = v`.
    pub cells: Family,
    /// `unary[a, v]` is true iff `a' = v`.
    pub unary: Option<Family>,
    /// `const[v]` per named constant, in declaration order.
    pub constants: Vec<(String, Family)>,
}

impl TableVars {
    #[inline]
    pub fn cell(&self, row: usize, col: usize, val: usize) -> Lit {
        self.cells.lit(&[row, col, val])
    }

    /// Allocates the families and their exactly-one constraints.
    pub fn allocate(cnf: &mut CnfInstance, n: usize, unary: bool, constants: &[String]) -> Result<TableVars, GroundError> {
        let cells = cnf.new_family("cell", &[n, n, n])?;
        let unary = if unary { Some(cnf.new_family("unary", &[n, n])?) } else { None };
        let mut consts = Vec::new();
        for c in constants {
            consts.push((c.clone(), cnf.new_family(&format!("const.{c}"), &[n])?));
        }
        let vars = TableVars { n, cells, unary, constants: consts };
        let mut group = Vec::with_capacity(n);
        for r in 0..n {
            for c in 0..n {
                group.clear();
                group.extend((0..n).map(|v| vars.cell(r, c, v)));
                cnf.exactly_one(&group);
            }
        }
        if let Some(u) = &vars.unary {
            for a in 0..n {
                group.clear();
                group.extend((0..n).map(|v| u.lit(&[a, v])));
                cnf.exactly_one(&group);
            }
        }
        for (_, f) in &vars.constants {
            group.clear();
            group.extend((0..n).map(|v| f.lit(&[v])));
            cnf.exactly_one(&group);
        }
        Ok(vars)
    }
}

/// Handle to the clauses emitted for one theory.
#[derive(Debug, Clone)]
pub struct GroundTheory {
    pub vars: TableVars,
    /// Exactly-one constraints of the variable families.
    pub structure: ClauseGroup,
    /// Instantiated axioms.
    pub axioms: ClauseGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Operand {
    Var(usize),
    Slot(usize),
}

#[derive(Debug, Clone, Copy)]
enum Atom {
    Cell(Operand, Operand),
    Unary(Operand),
    Const(usize),
}

#[derive(Debug, Clone, Copy)]
enum LitPlan {
    Static { positive: bool, a: Operand, b: Operand },
    Atom { positive: bool, value: Operand, atom: Atom },
}

struct ClausePlan {
    nvars: usize,
    slots: Vec<Atom>,
    lits: Vec<LitPlan>,
}

fn count_subterms<'t>(t: &'t Term, counts: &mut HashMap<&'t Term, usize>) {
    *counts.entry(t).or_insert(0) += 1;
    for c in t.children() {
        count_subterms(c, counts);
    }
}

struct Interner<'a> {
    var_index: &'a HashMap<&'a str, usize>,
    const_index: &'a HashMap<&'a str, usize>,
    slots: Vec<Atom>,
    seen: HashMap<Term, Operand>,
}

impl Interner<'_> {
    fn operand(&mut self, t: &Term) -> Result<Operand, GroundError> {
        if let Term::Var(v) = t {
            return Ok(Operand::Var(self.var_index[v.as_str()]));
        }
        if let Some(&op) = self.seen.get(t) {
            return Ok(op);
        }
        let atom = self.atom(t)?;
        let op = Operand::Slot(self.slots.len());
        self.slots.push(atom);
        self.seen.insert(t.clone(), op);
        Ok(op)
    }

    fn atom(&mut self, t: &Term) -> Result<Atom, GroundError> {
        Ok(match t {
            Term::Var(_) => unreachable!("variables are operands"),
            Term::Const(c) => {
                Atom::Const(*self.const_index.get(c.as_str()).ok_or_else(|| GroundError::UndeclaredConstant(c.clone()))?)
            }
            Term::Apply(a, b) => {
                let a = self.operand(a)?;
                let b = self.operand(b)?;
                Atom::Cell(a, b)
            }
            Term::Unary(a) => Atom::Unary(self.operand(a)?),
        })
    }
}

fn plan_clause(clause: &crate::axiom::Clause, const_index: &HashMap<&str, usize>) -> Result<ClausePlan, GroundError> {
    let var_index: HashMap<&str, usize> = clause.variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut counts = HashMap::new();
    for t in clause.terms() {
        count_subterms(t, &mut counts);
    }
    let mut interner = Interner { var_index: &var_index, const_index, slots: Vec::new(), seen: HashMap::new() };
    let mut lits = Vec::new();
    for lit in &clause.literals {
        let positive = lit.is_positive();
        let anchorable = |t: &Term| !t.is_var() && counts[t] == 1;
        let anchored = if anchorable(&lit.rhs) {
            Some((&lit.lhs, &lit.rhs))
        } else if anchorable(&lit.lhs) {
            Some((&lit.rhs, &lit.lhs))
        } else {
            None
        };
        lits.push(match anchored {
            Some((value_side, atom_side)) => {
                let value = interner.operand(value_side)?;
                let atom = interner.atom(atom_side)?;
                LitPlan::Atom { positive, value, atom }
            }
            None => {
                let a = interner.operand(&lit.lhs)?;
                let b = interner.operand(&lit.rhs)?;
                LitPlan::Static { positive, a, b }
            }
        });
    }
    Ok(ClausePlan { nvars: clause.variables.len(), slots: interner.slots, lits })
}

struct Emitter<'a> {
    vars: &'a TableVars,
    values: Vec<usize>,
    nvars: usize,
}

impl Emitter<'_> {
    #[inline]
    fn value(&self, op: Operand) -> usize {
        match op {
            Operand::Var(i) => self.values[i],
            Operand::Slot(j) => self.values[self.nvars + j],
        }
    }

    #[inline]
    fn atom_lit(&self, atom: Atom, val: usize) -> Lit {
        match atom {
            Atom::Cell(a, b) => self.vars.cell(self.value(a), self.value(b), val),
            Atom::Unary(a) => self.vars.unary.as_ref().expect("unary family allocated").lit(&[self.value(a), val]),
            Atom::Const(c) => self.vars.constants[c].1.lit(&[val]),
        }
    }
}

fn advance(values: &mut [usize], n: usize) -> bool {
    for v in values.iter_mut().rev() {
        *v += 1;
        if *v < n {
            return true;
        }
        *v = 0;
    }
    false
}

fn emit_plan(plan: &ClausePlan, vars: &TableVars, cnf: &mut CnfInstance) {
    let n = vars.n;
    let total = plan.nvars + plan.slots.len();
    let mut em = Emitter { vars, values: vec![0; total], nvars: plan.nvars };
    let var_only = |op: Operand| matches!(op, Operand::Var(_));
    let mut buf: Vec<Lit> = Vec::new();
    loop {
        // literals decided by variable values alone
        let satisfied_by_vars = plan.lits.iter().any(|l| match *l {
            LitPlan::Static { positive, a, b } if var_only(a) && var_only(b) => (em.value(a) == em.value(b)) == positive,
            _ => false,
        });
        if !satisfied_by_vars {
            for v in &mut em.values[plan.nvars..] {
                *v = 0;
            }
            loop {
                buf.clear();
                let mut satisfied = false;
                for l in &plan.lits {
                    match *l {
                        LitPlan::Static { positive, a, b } => {
                            if (em.value(a) == em.value(b)) == positive {
                                satisfied = true;
                                break;
                            }
                        }
                        LitPlan::Atom { positive, value, atom } => {
                            let lit = em.atom_lit(atom, em.value(value));
                            buf.push(if positive { lit } else { !lit });
                        }
                    }
                }
                if !satisfied {
                    for (j, &atom) in plan.slots.iter().enumerate() {
                        buf.push(!em.atom_lit(atom, em.values[plan.nvars + j]));
                    }
                    buf.sort_unstable_by_key(|l| (l.var(), l.is_positive()));
                    buf.dedup();
                    let tautology = buf.windows(2).any(|w| w[0].var() == w[1].var());
                    if !tautology {
                        if buf.is_empty() {
                            cnf.add_unsat_marker();
                        } else {
                            cnf.add_clause(&buf);
                        }
                    }
                }
                if !advance(&mut em.values[plan.nvars..], n) {
                    break;
                }
            }
        }
        if !advance(&mut em.values[..plan.nvars], n) {
            break;
        }
    }
}

/// Grounds `ax` over a domain of size `n` into `cnf`, projecting onto cells.
pub fn ground_theory(ax: &AxiomSet, n: usize, cnf: &mut CnfInstance) -> Result<GroundTheory, GroundError> {
    if n == 0 {
        return Err(GroundError::ZeroSize);
    }
    if n > 255 {
        return Err(GroundError::TooLarge(n));
    }
    let const_index: HashMap<&str, usize> =
        ax.named_constants.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let plans = ax
        .clauses
        .iter()
        .map(|c| plan_clause(c, &const_index))
        .collect::<Result<Vec<_>, _>>()?;

    let start = cnf.num_clauses();
    let vars = TableVars::allocate(cnf, n, ax.uses_unary, &ax.named_constants)?;
    let structure = cnf.group("ground.exactly-one", start);
    let start = cnf.num_clauses();
    for plan in &plans {
        emit_plan(plan, &vars, cnf);
    }
    let axioms = cnf.group("ground.axioms", start);
    cnf.add_projection(vars.cells.vars());
    Ok(GroundTheory { vars, structure, axioms })
}

/// Reads the table out of a model.
pub fn decode_model(model: &Model, vars: &TableVars) -> Result<Magma, GroundError> {
    let n = vars.n;
    let mut cells = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let trues: Vec<usize> = (0..n).filter(|&v| model.lit(vars.cell(r, c, v))).collect();
            match trues.as_slice() {
                [v] => cells.push(*v as u8),
                _ => return Err(GroundError::NotOneHot { row: r, col: c, count: trues.len() }),
            }
        }
    }
    Ok(Magma::new(n, cells).expect("decoded values are in range"))
}

/// Unit clauses fixing the table to `a`.
pub fn fix_table(cnf: &mut CnfInstance, vars: &TableVars, a: &Magma) {
    assert_eq!(a.size(), vars.n);
    for r in 0..vars.n {
        for c in 0..vars.n {
            cnf.add_unit(vars.cell(r, c, a.get(r, c)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::{builtin_class, parse_axioms};
    use crate::cnf::{BundledSolver, SatBackend, Var};

    fn models(ax: &AxiomSet, n: usize) -> Vec<Magma> {
        let mut cnf = CnfInstance::new();
        let g = ground_theory(ax, n, &mut cnf).unwrap();
        let mut out = Vec::new();
        let mut solver = BundledSolver::new();
        loop {
            match solver.solve(&cnf, &[]).unwrap().model() {
                None => break,
                Some(m) => {
                    assert!(m.satisfies(&cnf));
                    let a = decode_model(m, &g.vars).unwrap();
                    let block: Vec<Lit> = (0..n * n).map(|i| !g.vars.cell(i / n, i % n, a.get(i / n, i % n))).collect();
                    cnf.add_clause(&block);
                    out.push(a);
                }
            }
        }
        out.sort();
        out
    }

    /// Associativity instances `~A[y,z]=p | ~A[x,y]=q | ~A[x,p]=v | A[q,z]=v`,
    /// minus tautologies (a cell/value pair occurring in both polarities).
    fn hand_expanded_associativity(n: usize) -> usize {
        let mut count = 0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for p in 0..n {
                        for q in 0..n {
                            for v in 0..n {
                                let negs = [(y, z, p), (x, y, q), (x, p, v)];
                                let pos = (q, z, v);
                                if !negs.contains(&pos) {
                                    count += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn semigroup_clause_count() {
        let ax = builtin_class("A14").unwrap();
        let mut cnf = CnfInstance::new();
        let g = ground_theory(&ax, 2, &mut cnf).unwrap();
        let expected = hand_expanded_associativity(2);
        assert_eq!(expected, 32);
        assert_eq!(g.axioms.clauses.len(), expected);
        assert_eq!(g.structure.clauses.len(), 4 * 2);
    }

    #[test]
    fn left_cancellation_instance() {
        let ax = parse_axioms("x*y = x*z => y = z").unwrap();
        let mut cnf = CnfInstance::new();
        let g = ground_theory(&ax, 2, &mut cnf).unwrap();
        let mut expected = vec![!g.vars.cell(0, 0, 0), !g.vars.cell(0, 1, 0)];
        expected.sort_by_key(|l| (l.var(), l.is_positive()));
        assert!(g.axioms.clauses.clone().any(|i| cnf.clause(i) == expected.as_slice()));
    }

    #[test]
    fn constant_theory_has_n_models() {
        let ax = builtin_class("constant").unwrap();
        let ms = models(&ax, 2);
        assert_eq!(ms, vec![Magma::constant(2, 0), Magma::constant(2, 1)]);
        assert_eq!(models(&ax, 3).len(), 3);
    }

    #[test]
    fn decode_examples() {
        let mut cnf = CnfInstance::new();
        let vars = TableVars::allocate(&mut cnf, 2, false, &[]).unwrap();
        let from = |a: &Magma| {
            Model::from_values((1..=cnf.num_vars()).map(|id| {
                let v = Var::from_id(id);
                (0..4).any(|i| vars.cell(i / 2, i % 2, a.get(i / 2, i % 2)).var() == v)
            }))
        };
        let zero = Magma::constant(2, 0);
        assert_eq!(decode_model(&from(&zero), &vars).unwrap(), zero);
        let xor = Magma::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(decode_model(&from(&xor), &vars).unwrap(), xor);
        let mut values: Vec<bool> = (1..=cnf.num_vars()).map(|_| false).collect();
        values[vars.cell(0, 0, 0).var().index() - 1] = true;
        values[vars.cell(0, 0, 1).var().index() - 1] = true;
        assert!(matches!(
            decode_model(&Model::from_values(values), &vars),
            Err(GroundError::NotOneHot { row: 0, col: 0, count: 2 })
        ));
    }

    #[test]
    fn errors() {
        let ax = builtin_class("A14").unwrap();
        assert_eq!(ground_theory(&ax, 0, &mut CnfInstance::new()).unwrap_err(), GroundError::ZeroSize);
        let mut bad = parse_axioms("x = x").unwrap();
        bad.clauses[0].literals[0].rhs = Term::constant("k");
        assert!(matches!(ground_theory(&bad, 2, &mut CnfInstance::new()), Err(GroundError::UndeclaredConstant(_))));
    }

    #[test]
    fn unsatisfiable_theory_gets_marker() {
        let ax = parse_axioms("x = y").unwrap();
        assert!(models(&ax, 2).is_empty());
        assert_eq!(models(&ax, 1).len(), 1);
    }

    #[test]
    fn deterministic_emission() {
        for id in ["A3", "A5", "A9", "A12"] {
            let ax = builtin_class(id).unwrap();
            let run = || {
                let mut cnf = CnfInstance::new();
                ground_theory(&ax, 3, &mut cnf).unwrap();
                crate::cnf::emit_dimacs(&cnf, true)
            };
            assert_eq!(run(), run());
        }
    }

    #[test]
    fn group_models_at_three() {
        // Z3 is the only group of order 3; labelled copies: 3!/|Aut| = 6/2 = 3
        let ax = builtin_class("A3").unwrap();
        assert_eq!(models(&ax, 3).len(), 3);
    }
}
