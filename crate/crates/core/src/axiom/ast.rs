use std::fmt;

use serde::{Deserialize, Serialize};

/// A term over one binary operation, an optional postfix unary operation,
/// named constants and universally quantified variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
    Apply(Box<Term>, Box<Term>),
    Unary(Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn apply(lhs: Term, rhs: Term) -> Term {
        Term::Apply(Box::new(lhs), Box::new(rhs))
    }

    pub fn unary(arg: Term) -> Term {
        Term::Unary(Box::new(arg))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(_) => Vec::new(),
            Term::Apply(a, b) => vec![a, b],
            Term::Unary(a) => vec![a],
        }
    }

    /// Pushes variable names in order of first occurrence.
    pub fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|o| o == v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Apply(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Unary(a) => a.collect_vars(out),
        }
    }

    pub fn collect_consts(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                if !out.iter().any(|o| o == c) {
                    out.push(c.clone());
                }
            }
            Term::Apply(a, b) => {
                a.collect_consts(out);
                b.collect_consts(out);
            }
            Term::Unary(a) => a.collect_consts(out),
        }
    }

    pub fn uses_unary(&self) -> bool {
        match self {
            Term::Var(_) | Term::Const(_) => false,
            Term::Apply(a, b) => a.uses_unary() || b.uses_unary(),
            Term::Unary(_) => true,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) | Term::Const(name) => f.write_str(name),
            Term::Apply(a, b) => {
                write_operand(f, a)?;
                f.write_str("*")?;
                write_operand(f, b)
            }
            Term::Unary(a) => {
                write_operand(f, a)?;
                f.write_str("'")
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    match t {
        Term::Apply(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    Positive,
    Negative,
}

/// An equation (positive) or disequation (negative) between two terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub polarity: Polarity,
    pub lhs: Term,
    pub rhs: Term,
}

impl Literal {
    pub fn eq(lhs: Term, rhs: Term) -> Literal {
        Literal { polarity: Polarity::Positive, lhs, rhs }
    }

    pub fn neq(lhs: Term, rhs: Term) -> Literal {
        Literal { polarity: Polarity::Negative, lhs, rhs }
    }

    pub fn negated(&self) -> Literal {
        let polarity = match self.polarity {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        };
        Literal { polarity, ..self.clone() }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity == Polarity::Positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.polarity {
            Polarity::Positive => "=",
            Polarity::Negative => "!=",
        };
        write!(f, "{} {} {}", self.lhs, op, self.rhs)
    }
}

/// Disjunction of literals; variables are implicitly universally quantified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
    /// Variables in order of first occurrence.
    pub variables: Vec<String>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Clause {
        let mut variables = Vec::new();
        for lit in &literals {
            lit.lhs.collect_vars(&mut variables);
            lit.rhs.collect_vars(&mut variables);
        }
        Clause { literals, variables }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.literals.iter().flat_map(|l| [&l.lhs, &l.rhs])
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

/// A parsed, validated theory.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxiomSet {
    pub name: String,
    pub clauses: Vec<Clause>,
    pub uses_unary: bool,
    /// Some declared constant satisfies both `e*x = x` and `x*e = x` as axioms.
    pub uses_identity: bool,
    pub named_constants: Vec<String>,
}

impl AxiomSet {
    pub fn new(name: &str, clauses: Vec<Clause>, named_constants: Vec<String>, unary_declared: bool) -> AxiomSet {
        let uses_unary = unary_declared || clauses.iter().flat_map(Clause::terms).any(Term::uses_unary);
        let uses_identity = named_constants.iter().any(|c| has_identity_laws(&clauses, c));
        AxiomSet {
            name: name.to_string(),
            clauses,
            uses_unary,
            uses_identity,
            named_constants,
        }
    }

    /// The text without the class name; stable across renames.
    pub fn body_text(&self) -> String {
        let mut out = String::new();
        if !self.named_constants.is_empty() {
            out.push_str("const ");
            out.push_str(&self.named_constants.join(" "));
            out.push('\n');
        }
        if self.uses_unary {
            out.push_str("unary '\n");
        }
        for clause in &self.clauses {
            out.push_str(&clause.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class {}", self.name)?;
        f.write_str(&self.body_text())
    }
}

fn has_identity_laws(clauses: &[Clause], constant: &str) -> bool {
    let e = Term::constant(constant);
    let is_law = |clause: &Clause, left: bool| {
        if clause.literals.len() != 1 || clause.variables.len() != 1 {
            return false;
        }
        let lit = &clause.literals[0];
        if !lit.is_positive() {
            return false;
        }
        let x = Term::var(&clause.variables[0]);
        let product = if left {
            Term::apply(e.clone(), x.clone())
        } else {
            Term::apply(x.clone(), e.clone())
        };
        (lit.lhs == product && lit.rhs == x) || (lit.rhs == product && lit.lhs == x)
    };
    clauses.iter().any(|c| is_law(c, true)) && clauses.iter().any(|c| is_law(c, false))
}
