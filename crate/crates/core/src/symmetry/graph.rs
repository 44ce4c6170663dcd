//! Theories whose lex-leader models simulate lex-leader adjacency matrices.

use std::collections::BTreeSet;

use crate::axiom::{AxiomSet, Clause, Literal, Term};

use super::SymmetryError;

/// A simple undirected graph on vertices `1..=vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph, SymmetryError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(SymmetryError::SelfLoop(u));
            }
            if u == 0 || v == 0 || u > vertices || v > vertices {
                return Err(SymmetryError::Parse(format!("edge {u}-{v} outside 1..={vertices}")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph { vertices, edges: set })
    }

    /// DIMACS-style edge list: `p edge V E` then `e u v` lines; `c` lines are comments.
    pub fn parse(text: &str) -> Result<Graph, SymmetryError> {
        let mut vertices = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || SymmetryError::Parse(format!("line {}: {line:?}", lineno + 1));
            match toks.as_slice() {
                [] | ["c", ..] => {}
                ["p", "edge" | "col", v, _e] => vertices = Some(v.parse().map_err(|_| bad())?),
                ["e", u, v] => {
                    edges.push((u.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?));
                }
                _ => return Err(bad()),
            }
        }
        let vertices = vertices.ok_or_else(|| SymmetryError::Parse("missing 'p edge' header".into()))?;
        Graph::new(vertices, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.vertices).flat_map(move |u| (u + 1..=self.vertices).map(move |v| (u, v))).filter(|&(u, v)| !self.has_edge(u, v))
    }

    /// 0/1 adjacency matrix with vertex `i` at index `i-1`.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        (1..=self.vertices).map(|u| (1..=self.vertices).map(|v| self.has_edge(u, v) as u8).collect()).collect()
    }
}

/// Pair counts of a generated graph theory, for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphTheorySummary {
    pub constants: usize,
    pub edge_disequations: usize,
    pub non_edge_equations: usize,
    pub domain_size: usize,
}

pub fn summarize_graph_theory(g: &Graph) -> GraphTheorySummary {
    GraphTheorySummary {
        constants: g.vertices + 1,
        edge_disequations: g.edges.len(),
        non_edge_equations: g.non_edges().count(),
        domain_size: g.vertices + 1,
    }
}

fn vertex(i: usize) -> Term {
    Term::constant(&format!("v{i}"))
}

/// `c` is absorbing and the only idempotent, all constants are distinct,
/// products of adjacent vertices avoid `c` and all others equal it.
/// Each unordered pair yields one clause per orientation.
pub fn gen_graph_theory(g: &Graph) -> AxiomSet {
    let c = || Term::constant("c");
    let x = || Term::var("x");
    let unit = |l: Literal| Clause::new(vec![l]);
    let mut clauses = vec![
        unit(Literal::eq(Term::apply(c(), x()), c())),
        unit(Literal::eq(Term::apply(x(), c()), c())),
        unit(Literal::eq(Term::apply(x(), x()), c())),
    ];
    let mut constants = vec!["c".to_string()];
    constants.extend((1..=g.vertices).map(|i| format!("v{i}")));
    let terms: Vec<Term> = std::iter::once(c()).chain((1..=g.vertices).map(vertex)).collect();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            clauses.push(unit(Literal::neq(terms[i].clone(), terms[j].clone())));
        }
    }
    for &(u, v) in &g.edges {
        clauses.push(unit(Literal::neq(Term::apply(vertex(u), vertex(v)), c())));
        clauses.push(unit(Literal::neq(Term::apply(vertex(v), vertex(u)), c())));
    }
    for (u, v) in g.non_edges() {
        clauses.push(unit(Literal::eq(Term::apply(vertex(u), vertex(v)), c())));
        clauses.push(unit(Literal::eq(Term::apply(vertex(v), vertex(u)), c())));
    }
    AxiomSet::new("graph", clauses, constants, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::parse_axioms;

    #[test]
    fn parse_edge_lists() {
        let g = Graph::parse("c path\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.vertices(), 3);
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(1, 3));
        assert_eq!(g.adjacency(), vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]);
        assert!(matches!(Graph::parse("p edge 2 1\ne 1 1\n"), Err(SymmetryError::SelfLoop(1))));
        assert!(Graph::parse("e 1 2\n").is_err());
        assert!(Graph::parse("p edge 2 1\ne 1 3\n").is_err());
    }

    #[test]
    fn summaries() {
        let triangle = Graph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let s = summarize_graph_theory(&triangle);
        assert_eq!((s.edge_disequations, s.non_edge_equations), (3, 0));
        let path = Graph::new(3, [(1, 2), (2, 3)]).unwrap();
        let s = summarize_graph_theory(&path);
        assert_eq!((s.edge_disequations, s.non_edge_equations), (2, 1));
        let edge = Graph::new(2, [(1, 2)]).unwrap();
        assert_eq!(summarize_graph_theory(&edge).constants, 3);
    }

    #[test]
    fn theory_shape_and_round_trip() {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        let ax = gen_graph_theory(&g);
        assert_eq!(ax.named_constants, vec!["c", "v1", "v2"]);
        // 3 absorbing/idempotent laws, 3 distinctness, 2 edge orientations
        assert_eq!(ax.clauses.len(), 8);
        let again = parse_axioms(&ax.to_string()).unwrap();
        assert_eq!(again.clauses, ax.clauses);
        assert_eq!(again.named_constants, ax.named_constants);
    }
}
