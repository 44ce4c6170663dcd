//! The axiom language: terms, clauses and theories over one binary operation.

mod ast;
mod library;
mod parser;

use thiserror::Error;

pub use ast::{AxiomSet, Clause, Literal, Polarity, Term};
pub use library::{builtin_class, lookup, table_classes, ClassInfo, CLASSES};
pub use parser::parse_axioms;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AxiomError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown base class {0:?}")]
    UnknownBaseClass(String),
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("more than one binary operation symbol ({first:?} and {second:?}) at {line}:{col}")]
    MultipleBinaryOps { first: char, second: char, line: usize, col: usize },
    #[error("unbound variable {name:?} at {line}:{col}")]
    UnboundVariable { name: String, line: usize, col: usize },
}

/// Resolves a class argument: a bundled id/name, or a path to an `.alg` file.
pub fn load_theory(spec: &str) -> Result<AxiomSet, LoadError> {
    if lookup(spec).is_some() {
        return Ok(builtin_class(spec)?);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| LoadError::Io(spec.to_string(), e.to_string()))?;
    Ok(parse_axioms(&text)?)
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Axiom(#[from] AxiomError),
    #[error("cannot read {0}: {1}")]
    Io(String, String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn term_strategy() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["x", "y", "z", "w"]).prop_map(Term::var),
            Just(Term::constant("e")),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::apply(a, b)),
                inner.prop_map(Term::unary),
            ]
        })
    }

    fn literal_strategy() -> impl Strategy<Value = Literal> {
        (term_strategy(), term_strategy(), any::<bool>())
            .prop_map(|(l, r, pos)| if pos { Literal::eq(l, r) } else { Literal::neq(l, r) })
    }

    proptest! {
        #[test]
        fn pretty_print_round_trips(clauses in prop::collection::vec(prop::collection::vec(literal_strategy(), 1..4), 0..4)) {
            let clauses: Vec<Clause> = clauses.into_iter().map(Clause::new).collect();
            let ax = AxiomSet::new("roundtrip", clauses, vec!["e".to_string()], false);
            let reparsed = parse_axioms(&ax.to_string()).unwrap();
            prop_assert_eq!(reparsed, ax);
        }
    }

    #[test]
    fn bundled_classes_round_trip() {
        for info in CLASSES {
            let ax = builtin_class(info.id).unwrap();
            assert_eq!(parse_axioms(&ax.to_string()).unwrap(), ax);
        }
    }
}
