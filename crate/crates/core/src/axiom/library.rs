//! Bundled algebra classes.

use super::ast::AxiomSet;
use super::parser::parse_with_depth;
use super::AxiomError;

/// One bundled class definition.
#[derive(Debug, Clone, Copy)]
pub struct ClassInfo {
    /// `A1`..`A14`, or a plain name for extra classes.
    pub id: &'static str,
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
}

pub const CLASSES: &[ClassInfo] = &[
    ClassInfo { id: "A1", name: "ag-groupoid", description: "AG-groupoid", source: include_str!("../../classes/ag_groupoid.alg") },
    ClassInfo { id: "A2", name: "comm-quasigroup", description: "commutative quasigroup", source: include_str!("../../classes/comm_quasigroup.alg") },
    ClassInfo { id: "A3", name: "group", description: "group", source: include_str!("../../classes/group.alg") },
    ClassInfo { id: "A4", name: "impl-zroupoid", description: "implication zroupoid", source: include_str!("../../classes/impl_zroupoid.alg") },
    ClassInfo { id: "A5", name: "inverse-semigroup", description: "inverse semigroup", source: include_str!("../../classes/inverse_semigroup.alg") },
    ClassInfo { id: "A6", name: "ip-loop", description: "inverse property loop", source: include_str!("../../classes/ip_loop.alg") },
    ClassInfo { id: "A7", name: "loop", description: "loop", source: include_str!("../../classes/loop.alg") },
    ClassInfo { id: "A8", name: "magma", description: "magma", source: include_str!("../../classes/magma.alg") },
    ClassInfo { id: "A9", name: "medial-quasigroup", description: "medial quasigroup", source: include_str!("../../classes/medial_quasigroup.alg") },
    ClassInfo { id: "A10", name: "monoid", description: "monoid", source: include_str!("../../classes/monoid.alg") },
    ClassInfo { id: "A11", name: "quasigroup", description: "quasigroup", source: include_str!("../../classes/quasigroup.alg") },
    ClassInfo { id: "A12", name: "rect-groupoid", description: "rectangular groupoid", source: include_str!("../../classes/rect_groupoid.alg") },
    ClassInfo { id: "A13", name: "right-involutory", description: "right involutory magma", source: include_str!("../../classes/right_involutory.alg") },
    ClassInfo { id: "A14", name: "semigroup", description: "semigroup", source: include_str!("../../classes/semigroup.alg") },
    ClassInfo { id: "constant", name: "constant", description: "constant operation", source: include_str!("../../classes/constant.alg") },
];

/// The fourteen `A*` classes, in table order.
pub fn table_classes() -> impl Iterator<Item = &'static ClassInfo> {
    CLASSES.iter().filter(|c| c.id.starts_with('A'))
}

pub fn lookup(id: &str) -> Option<&'static ClassInfo> {
    CLASSES
        .iter()
        .find(|c| c.id.eq_ignore_ascii_case(id) || c.name.eq_ignore_ascii_case(id))
}

pub(crate) fn class_source(id: &str) -> Option<&'static str> {
    lookup(id).map(|c| c.source)
}

pub fn builtin_class(id: &str) -> Result<AxiomSet, AxiomError> {
    let info = lookup(id).ok_or_else(|| AxiomError::UnknownClass(id.to_string()))?;
    parse_with_depth(info.source, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::{parse_axioms, Term};

    #[test]
    fn all_classes_parse() {
        for info in CLASSES {
            let ax = builtin_class(info.id).unwrap_or_else(|e| panic!("{}: {e}", info.id));
            assert_eq!(ax.name, info.name);
        }
        assert_eq!(table_classes().count(), 14);
    }

    #[test]
    fn semigroup_and_magma() {
        assert_eq!(builtin_class("A14").unwrap().clauses.len(), 1);
        assert!(builtin_class("A8").unwrap().clauses.is_empty());
    }

    #[test]
    fn group_extends_monoid() {
        let group = builtin_class("A3").unwrap();
        let monoid = builtin_class("A10").unwrap();
        assert_eq!(group.clauses.len(), monoid.clauses.len() + 2);
        assert_eq!(&group.clauses[..monoid.clauses.len()], &monoid.clauses[..]);
        let inverse = parse_axioms("const e\nunary '\nx x' = e\nx' x = e").unwrap();
        assert_eq!(&group.clauses[monoid.clauses.len()..], &inverse.clauses[..]);
    }

    #[test]
    fn usage_flags() {
        let identity = ["A3", "A6", "A7", "A10"];
        let unary = ["A3", "A5", "A6"];
        for info in table_classes() {
            let ax = builtin_class(info.id).unwrap();
            assert_eq!(ax.uses_identity, identity.contains(&info.id), "{}", info.id);
            assert_eq!(ax.uses_unary, unary.contains(&info.id), "{}", info.id);
        }
        let zroupoid = builtin_class("A4").unwrap();
        assert_eq!(zroupoid.named_constants, vec!["e"]);
        assert!(zroupoid.clauses[1].variables.is_empty());
    }

    #[test]
    fn lookup_by_name_or_id() {
        assert_eq!(lookup("semigroup").unwrap().id, "A14");
        assert_eq!(lookup("a3").unwrap().name, "group");
        assert!(matches!(builtin_class("A15"), Err(AxiomError::UnknownClass(_))));
    }

    #[test]
    fn inverse_semigroup_shape() {
        let ax = builtin_class("A5").unwrap();
        let x = Term::var("x");
        let lit = &ax.clauses[1].literals[0];
        assert_eq!(lit.lhs, x);
        assert_eq!(lit.rhs, Term::apply(Term::apply(x.clone(), Term::unary(x.clone())), x));
    }
}
