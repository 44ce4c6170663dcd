//! Direct evaluation of clauses over partially known interpretations.

use std::collections::HashMap;

use crate::axiom::{AxiomSet, Clause, Term};

#[derive(Debug, Clone)]
enum Expr {
    Var(usize),
    Const(usize),
    Apply(Box<Expr>, Box<Expr>),
    Unary(Box<Expr>),
}

#[derive(Debug, Clone)]
struct CLiteral {
    positive: bool,
    lhs: Expr,
    rhs: Expr,
}

#[derive(Debug, Clone)]
struct CClause {
    nvars: usize,
    literals: Vec<CLiteral>,
}

/// Clauses with variables and constants resolved to indices.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    clauses: Vec<CClause>,
    pub num_consts: usize,
    pub uses_unary: bool,
}

/// An interpretation where any symbol may still be unknown.
#[derive(Debug, Clone)]
pub(crate) struct Partial {
    pub n: usize,
    pub cells: Vec<Option<u8>>,
    pub unary: Vec<Option<u8>>,
    pub consts: Vec<Option<u8>>,
}

impl Partial {
    pub fn empty(n: usize, num_consts: usize) -> Partial {
        Partial { n, cells: vec![None; n * n], unary: vec![None; n], consts: vec![None; num_consts] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Satisfied,
    Violated,
    Open,
}

fn compile_term(t: &Term, vars: &HashMap<&str, usize>, consts: &HashMap<&str, usize>) -> Expr {
    match t {
        Term::Var(v) => Expr::Var(vars[v.as_str()]),
        Term::Const(c) => Expr::Const(consts[c.as_str()]),
        Term::Apply(a, b) => Expr::Apply(Box::new(compile_term(a, vars, consts)), Box::new(compile_term(b, vars, consts))),
        Term::Unary(a) => Expr::Unary(Box::new(compile_term(a, vars, consts))),
    }
}

fn compile_clause(c: &Clause, consts: &HashMap<&str, usize>) -> CClause {
    let vars: HashMap<&str, usize> = c.variables.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    CClause {
        nvars: vars.len(),
        literals: c
            .literals
            .iter()
            .map(|l| CLiteral {
                positive: l.is_positive(),
                lhs: compile_term(&l.lhs, &vars, consts),
                rhs: compile_term(&l.rhs, &vars, consts),
            })
            .collect(),
    }
}

impl Compiled {
    pub fn new(ax: &AxiomSet) -> Compiled {
        let consts: HashMap<&str, usize> =
            ax.named_constants.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        Compiled {
            clauses: ax.clauses.iter().map(|c| compile_clause(c, &consts)).collect(),
            num_consts: ax.named_constants.len(),
            uses_unary: ax.uses_unary,
        }
    }

    /// Violated if some instance is false, satisfied if all are true.
    pub fn status(&self, p: &Partial) -> Status {
        let mut open = false;
        let mut env = Vec::new();
        for clause in &self.clauses {
            env.clear();
            env.resize(clause.nvars, 0usize);
            loop {
                match clause_status(clause, p, &env) {
                    Status::Violated => return Status::Violated,
                    Status::Open => open = true,
                    Status::Satisfied => {}
                }
                if !advance(&mut env, p.n) {
                    break;
                }
            }
        }
        if open {
            Status::Open
        } else {
            Status::Satisfied
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

fn eval(e: &Expr, p: &Partial, env: &[usize]) -> Option<usize> {
    match e {
        Expr::Var(i) => Some(env[*i]),
        Expr::Const(i) => p.consts[*i].map(usize::from),
        Expr::Apply(a, b) => {
            let a = eval(a, p, env)?;
            let b = eval(b, p, env)?;
            p.cells[a * p.n + b].map(usize::from)
        }
        Expr::Unary(a) => p.unary[eval(a, p, env)?].map(usize::from),
    }
}

fn clause_status(c: &CClause, p: &Partial, env: &[usize]) -> Status {
    let mut open = false;
    for l in &c.literals {
        match (eval(&l.lhs, p, env), eval(&l.rhs, p, env)) {
            (Some(a), Some(b)) => {
                if (a == b) == l.positive {
                    return Status::Satisfied;
                }
            }
            _ => open = true,
        }
    }
    if open {
        Status::Open
    } else {
        Status::Violated
    }
}
