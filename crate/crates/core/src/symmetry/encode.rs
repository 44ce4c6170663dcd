//! CNF renderings of lex comparisons between a table and its permuted copy.

use crate::cnf::{ClauseGroup, CnfInstance, Family, Lit, Model};

use super::perm::Permutation;
use super::vectorization::Vectorization;
use super::SymmetryError;

/// `perm[arg, val]` is true iff `π(arg) = val`.
#[derive(Debug, Clone)]
pub struct PermVars {
    pub n: usize,
    pub family: Family,
}

impl PermVars {
    #[inline]
    pub fn lit(&self, arg: usize, val: usize) -> Lit {
        self.family.lit(&[arg, val])
    }

    pub fn decode(&self, model: &Model) -> Result<Permutation, SymmetryError> {
        let image = (0..self.n)
            .map(|a| {
                let vals: Vec<usize> = (0..self.n).filter(|&v| model.lit(self.lit(a, v))).collect();
                match vals.as_slice() {
                    [v] => Ok(*v),
                    _ => Err(SymmetryError::Decode(format!("perm row {a} has {} true values", vals.len()))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(image)
    }
}

/// Clauses and auxiliary variables of one emitted constraint.
#[derive(Debug, Clone)]
pub struct LexHandle {
    pub group: ClauseGroup,
    pub aux_vars: u32,
}

fn cell_dims(cells: &Family) -> usize {
    let d = cells.dims();
    assert!(d.len() == 3 && d[0] == d[1] && d[1] == d[2], "cell family must be n x n x n");
    d[0]
}

fn handle(cnf: &CnfInstance, name: &str, start: usize, vars_before: u32) -> LexHandle {
    LexHandle { group: cnf.group(name, start), aux_vars: cnf.num_vars() - vars_before }
}

/// A free permutation: `n²` variables, exactly one per row and per column.
pub fn encode_free_perm(cnf: &mut CnfInstance, n: usize) -> Result<PermVars, SymmetryError> {
    let tag = cnf.next_tag();
    let family = cnf.new_family(&format!("perm{tag}"), &[n, n])?;
    let pv = PermVars { n, family };
    for a in 0..n {
        let row: Vec<Lit> = (0..n).map(|v| pv.lit(a, v)).collect();
        cnf.exactly_one(&row);
    }
    for v in 0..n {
        let col: Vec<Lit> = (0..n).map(|a| pv.lit(a, v)).collect();
        cnf.exactly_one(&col);
    }
    Ok(pv)
}

/// The mapping r'→r, c'→c, m'→m can be part of one bijection.
#[inline]
fn consistent(pairs: [(usize, usize); 3]) -> bool {
    (0..3).all(|i| (0..3).all(|j| (pairs[i].0 == pairs[j].0) == (pairs[i].1 == pairs[j].1)))
}

/// `π(A) ≺ A` along `v`, with both the table and `π` free.
///
/// `pre[r,c,r',c',m',m]` asserts that `(r',c',m')` are the pre-images of
/// `(r,c,m)` and `A[r',c'] = m'`, so that `π(A)[r,c] = m`.
pub fn encode_strict_less_free(
    cnf: &mut CnfInstance,
    v: &Vectorization,
    cells: &Family,
    perm: &PermVars,
) -> Result<LexHandle, SymmetryError> {
    let n = cell_dims(cells);
    if v.size() != n || perm.n != n {
        return Err(SymmetryError::SizeMismatch(v.size(), n));
    }
    let start = cnf.num_clauses();
    let vars_before = cnf.num_vars();
    let tag = cnf.next_tag();
    let pre = cnf.new_family(&format!("lex{tag}.pre"), &[n, n, n, n, n, n])?;
    let len = n * n;
    let gt = cnf.new_family(&format!("lex{tag}.gt"), &[len])?;
    let eq = cnf.new_family(&format!("lex{tag}.eq"), &[len])?;
    let chain = cnf.new_family(&format!("lex{tag}.r"), &[len.saturating_sub(1)])?;
    let a = |r: usize, c: usize, d: usize| cells.lit(&[r, c, d]);

    let cell_positions: Vec<(usize, usize)> = v.order().to_vec();
    let mut used = vec![false; n * n];
    for &(r, c) in &cell_positions {
        used[r * n + c] = true;
        for (rp, cp, mp, m) in quads(n) {
            if !consistent([(rp, r), (cp, c), (mp, m)]) {
                continue;
            }
            let p = pre.lit(&[r, c, rp, cp, mp, m]);
            cnf.add_clause(&[!p, perm.lit(rp, r)]);
            cnf.add_clause(&[!p, perm.lit(cp, c)]);
            cnf.add_clause(&[!p, perm.lit(mp, m)]);
            cnf.add_clause(&[!p, a(rp, cp, mp)]);
        }
    }
    debug_assert!(used.iter().all(|&u| u));

    let mut clause = Vec::new();
    for (i, &(r, c)) in cell_positions.iter().enumerate() {
        for d in 0..n {
            // gt_i: π(A) has a smaller value than d here.
            clause.clear();
            clause.extend([!gt.lit(&[i]), !a(r, c, d)]);
            for (rp, cp, mp, m) in quads(n) {
                if m < d && consistent([(rp, r), (cp, c), (mp, m)]) {
                    clause.push(pre.lit(&[r, c, rp, cp, mp, m]));
                }
            }
            cnf.add_clause(&clause);
            // eq_i: π(A) has exactly d here.
            clause.clear();
            clause.extend([!eq.lit(&[i]), !a(r, c, d)]);
            for rp in 0..n {
                for cp in 0..n {
                    for mp in 0..n {
                        if consistent([(rp, r), (cp, c), (mp, d)]) {
                            clause.push(pre.lit(&[r, c, rp, cp, mp, d]));
                        }
                    }
                }
            }
            cnf.add_clause(&clause);
        }
    }

    if len == 1 {
        cnf.add_unit(gt.lit(&[0]));
    } else {
        cnf.add_clause(&[gt.lit(&[0]), eq.lit(&[0])]);
        cnf.add_clause(&[gt.lit(&[0]), chain.lit(&[0])]);
        for i in 1..len - 1 {
            cnf.add_clause(&[!chain.lit(&[i - 1]), gt.lit(&[i]), eq.lit(&[i])]);
            cnf.add_clause(&[!chain.lit(&[i - 1]), gt.lit(&[i]), chain.lit(&[i])]);
        }
        cnf.add_clause(&[!chain.lit(&[len - 2]), gt.lit(&[len - 1])]);
    }
    Ok(handle(cnf, &format!("lex{tag}.strict-less"), start, vars_before))
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d)))))
}

/// `A ⪯ π(A)` along `v` for a known `π`.
///
/// At position i with cell (r,c), `π(A)[r,c] = π(A[q])` where `q` is the
/// pre-image cell. `y_i` means the first i positions are equal.
pub fn encode_leq_fixed(
    cnf: &mut CnfInstance,
    v: &Vectorization,
    cells: &Family,
    pi: &Permutation,
) -> Result<LexHandle, SymmetryError> {
    let n = cell_dims(cells);
    if v.size() != n || pi.size() != n {
        return Err(SymmetryError::SizeMismatch(pi.size(), n));
    }
    let start = cnf.num_clauses();
    let vars_before = cnf.num_vars();
    let tag = cnf.next_tag();
    if pi.is_identity() {
        return Ok(handle(cnf, &format!("lex{tag}.leq-fixed"), start, vars_before));
    }
    let len = n * n;
    let eqs = cnf.new_family(&format!("lex{tag}.y"), &[len.saturating_sub(1)])?;
    let inv = pi.inverse();
    let a = |r: usize, c: usize, d: usize| cells.lit(&[r, c, d]);
    let mut clause = Vec::with_capacity(4);

    for (i, &(r, c)) in v.order().iter().enumerate() {
        let (qr, qc) = (inv.apply(r), inv.apply(c));
        let same_cell = (qr, qc) == (r, c);
        let prefix = (i > 0).then(|| !eqs.lit(&[i - 1]));
        for d in 0..n {
            for m in 0..=d {
                // A[q] maps to m under π; with q the same cell its value is fixed to d.
                let qv = inv.apply(m);
                if same_cell && qv != d {
                    continue;
                }
                clause.clear();
                clause.extend(prefix);
                clause.push(!a(r, c, d));
                if !same_cell {
                    clause.push(!a(qr, qc, qv));
                }
                if m < d {
                    cnf.add_clause(&clause);
                } else if i + 1 < len {
                    clause.push(eqs.lit(&[i]));
                    cnf.add_clause(&clause);
                }
            }
        }
    }
    Ok(handle(cnf, &format!("lex{tag}.leq-fixed"), start, vars_before))
}

/// Static least-number break: the value at position i may exceed every
/// designated value by at most one, where the designated values are the
/// indices of all cells up to i and all values before i.
pub fn encode_lnh(cnf: &mut CnfInstance, v: &Vectorization, cells: &Family) -> Result<LexHandle, SymmetryError> {
    let n = cell_dims(cells);
    if v.size() != n {
        return Err(SymmetryError::SizeMismatch(v.size(), n));
    }
    let start = cnf.num_clauses();
    let vars_before = cnf.num_vars();
    let tag = cnf.next_tag();
    let len = n * n;
    // g[i, k]: some position ≤ i holds a value ≥ k.
    let g = cnf.new_family(&format!("lnh{tag}.max"), &[len, n])?;
    let mut index_bound = 0;
    let mut clause = Vec::new();
    for (i, &(r, c)) in v.order().iter().enumerate() {
        index_bound = index_bound.max(r).max(c);
        for d in index_bound + 2..n {
            if i == 0 {
                cnf.add_clause(&[!cells.lit(&[r, c, d])]);
            } else {
                cnf.add_clause(&[!cells.lit(&[r, c, d]), g.lit(&[i - 1, d - 1])]);
            }
        }
        for k in 1..n {
            clause.clear();
            clause.push(!g.lit(&[i, k]));
            if i > 0 {
                clause.push(g.lit(&[i - 1, k]));
            }
            clause.extend((k..n).map(|val| cells.lit(&[r, c, val])));
            cnf.add_clause(&clause);
        }
    }
    Ok(handle(cnf, &format!("lnh{tag}"), start, vars_before))
}

#[cfg(test)]
mod tests {
    use super::super::perm::apply_perm;
    use super::super::vectorization::OrderKind;
    use super::*;
    use crate::cnf::{BundledSolver, CountOutcome, SatBackend};
    use crate::ground::{fix_table, TableVars};
    use crate::magma::{all_tables, Magma};
    use std::cmp::Ordering;

    fn table_vars(cnf: &mut CnfInstance, n: usize) -> TableVars {
        TableVars::allocate(cnf, n, false, &[]).unwrap()
    }

    fn sat(cnf: &CnfInstance) -> Option<Model> {
        BundledSolver::new().solve(cnf, &[]).unwrap().model().cloned()
    }

    fn fix_perm(cnf: &mut CnfInstance, pv: &PermVars, pi: &Permutation) {
        for a in 0..pv.n {
            cnf.add_unit(pv.lit(a, pi.apply(a)));
        }
    }

    #[test]
    fn free_perm_models_are_permutations() {
        for (n, expected) in [(1, 1), (2, 2), (3, 6), (4, 24)] {
            let mut cnf = CnfInstance::new();
            let pv = encode_free_perm(&mut cnf, n).unwrap();
            assert_eq!(cnf.num_vars() as usize, n * n);
            cnf.add_projection(pv.family.vars());
            let mut solver = BundledSolver::new();
            assert_eq!(solver.count_projected(&cnf, 1000).unwrap(), CountOutcome::Exact(expected));
        }
        let mut cnf = CnfInstance::new();
        let pv = encode_free_perm(&mut cnf, 3).unwrap();
        let m = sat(&cnf).unwrap();
        assert_eq!(pv.decode(&m).unwrap().size(), 3);
    }

    fn strict_less_sat(kind: OrderKind, a: &Magma, pi: &Permutation) -> bool {
        let n = a.size();
        let mut cnf = CnfInstance::new();
        let tv = table_vars(&mut cnf, n);
        let pv = encode_free_perm(&mut cnf, n).unwrap();
        encode_strict_less_free(&mut cnf, &Vectorization::new(kind, n), &tv.cells, &pv).unwrap();
        fix_table(&mut cnf, &tv, a);
        fix_perm(&mut cnf, &pv, pi);
        sat(&cnf).is_some()
    }

    fn leq_fixed_sat(kind: OrderKind, a: &Magma, pi: &Permutation) -> bool {
        let n = a.size();
        let mut cnf = CnfInstance::new();
        let tv = table_vars(&mut cnf, n);
        encode_leq_fixed(&mut cnf, &Vectorization::new(kind, n), &tv.cells, pi).unwrap();
        fix_table(&mut cnf, &tv, a);
        sat(&cnf).is_some()
    }

    #[test]
    fn strict_less_examples() {
        let xor = Magma::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        let ones = Magma::constant(2, 1);
        let swap = Permutation::transposition(2, 0, 1);
        for kind in [OrderKind::Row, OrderKind::Diagonal] {
            for pi in Permutation::all(2) {
                assert!(!strict_less_sat(kind, &xor, &pi));
                assert!(!strict_less_sat(kind, &Magma::constant(2, 0), &pi));
            }
            assert!(strict_less_sat(kind, &ones, &swap));
        }
        // with π free, the model picks the swap
        let mut cnf = CnfInstance::new();
        let tv = table_vars(&mut cnf, 2);
        let pv = encode_free_perm(&mut cnf, 2).unwrap();
        encode_strict_less_free(&mut cnf, &Vectorization::new(OrderKind::Row, 2), &tv.cells, &pv).unwrap();
        fix_table(&mut cnf, &tv, &ones);
        assert_eq!(pv.decode(&sat(&cnf).unwrap()).unwrap(), swap);
    }

    #[test]
    fn single_cell_domain() {
        let a = Magma::constant(1, 0);
        let id = Permutation::identity(1);
        assert!(!strict_less_sat(OrderKind::Row, &a, &id));
        assert!(leq_fixed_sat(OrderKind::Row, &a, &id));
    }

    #[test]
    fn exhaustive_equivalence_n2() {
        for kind in [OrderKind::Row, OrderKind::Diagonal, OrderKind::Concentric] {
            let v = Vectorization::new(kind, 2);
            for a in all_tables(2) {
                for pi in Permutation::all(2) {
                    let less = v.lex_compare(&apply_perm(&pi, &a).unwrap(), &a).unwrap() == Ordering::Less;
                    assert_eq!(strict_less_sat(kind, &a, &pi), less, "{kind} {pi} {a:?}");
                    assert_eq!(leq_fixed_sat(kind, &a, &pi), !less, "{kind} {pi} {a:?}");
                }
            }
        }
    }

    #[test]
    fn sampled_equivalence_n3() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let perms: Vec<Permutation> = Permutation::all(3).collect();
        for _ in 0..60 {
            let cells: Vec<u8> = (0..9).map(|_| rng.random_range(0..3)).collect();
            let a = Magma::new(3, cells).unwrap();
            let pi = &perms[rng.random_range(0..perms.len())];
            for kind in [OrderKind::Row, OrderKind::Diagonal] {
                let v = Vectorization::new(kind, 3);
                let less = v.lex_compare(&apply_perm(pi, &a).unwrap(), &a).unwrap() == Ordering::Less;
                assert_eq!(strict_less_sat(kind, &a, pi), less);
                assert_eq!(leq_fixed_sat(kind, &a, pi), !less);
            }
        }
    }

    #[test]
    fn leq_identity_is_vacuous() {
        let mut cnf = CnfInstance::new();
        let tv = table_vars(&mut cnf, 3);
        let before = cnf.num_clauses();
        let h = encode_leq_fixed(&mut cnf, &Vectorization::new(OrderKind::Row, 3), &tv.cells, &Permutation::identity(3))
            .unwrap();
        assert_eq!(cnf.num_clauses(), before);
        assert_eq!(h.aux_vars, 0);
    }

    #[test]
    fn leq_rejects_corner_two() {
        let mut a = Magma::constant(4, 0);
        a.set(3, 3, 2);
        assert!(!leq_fixed_sat(OrderKind::Row, &a, &Permutation::transposition(4, 1, 2)));
    }

    fn lnh_admits(kind: OrderKind, a: &Magma) -> bool {
        let n = a.size();
        let mut cnf = CnfInstance::new();
        let tv = table_vars(&mut cnf, n);
        encode_lnh(&mut cnf, &Vectorization::new(kind, n), &tv.cells).unwrap();
        fix_table(&mut cnf, &tv, a);
        sat(&cnf).is_some()
    }

    #[test]
    fn lnh_first_cell() {
        for kind in [OrderKind::Row, OrderKind::Diagonal] {
            let mut cnf = CnfInstance::new();
            let tv = table_vars(&mut cnf, 4);
            encode_lnh(&mut cnf, &Vectorization::new(kind, 4), &tv.cells).unwrap();
            let mut solver = BundledSolver::new();
            for d in 0..4 {
                let ok = solver.solve(&cnf, &[tv.cell(0, 0, d)]).unwrap().model().is_some();
                assert_eq!(ok, d <= 1, "value {d}");
            }
        }
        let mut a = Magma::constant(4, 0);
        a.set(3, 3, 2);
        assert!(lnh_admits(OrderKind::Row, &a));
        assert!(lnh_admits(OrderKind::Row, &Magma::constant(4, 0)));
    }

    #[test]
    fn lnh_encoding_matches_predicate() {
        for kind in [OrderKind::Row, OrderKind::Diagonal] {
            let v = Vectorization::new(kind, 2);
            for a in all_tables(2) {
                assert_eq!(lnh_admits(kind, &a), super::super::partial::satisfies_lnh(&v, &a).unwrap());
            }
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..40 {
            let cells: Vec<u8> = (0..9).map(|_| rng.random_range(0..3)).collect();
            let a = Magma::new(3, cells).unwrap();
            for kind in [OrderKind::Row, OrderKind::Diagonal] {
                let v = Vectorization::new(kind, 3);
                assert_eq!(lnh_admits(kind, &a), super::super::partial::satisfies_lnh(&v, &a).unwrap());
            }
        }
    }
}
