//! Brute-force ground truth for small domains.

mod eval;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::axiom::AxiomSet;
use crate::cnf::{CnfInstance, CountOutcome, SatBackend, SolveError};
use crate::magma::{all_tables, Magma};
use crate::symmetry::{apply_perm, Permutation, Vectorization};

use eval::{Compiled, Partial, Status};

/// Largest `n^(n²)` scanned by exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;
/// Orbit computation iterates all of S_n.
pub const ORBIT_MAX_N: usize = 9;
/// Canonicity checks enumerate every model; beyond this they are refused.
pub const VERIFY_MAX_N: usize = 8;
pub const DEFAULT_COUNT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} refused for n={n}: {limit}")]
    SizeGuard { what: &'static str, n: usize, limit: String },
    #[error("models of different sizes ({0} and {1})")]
    MixedSizes(usize, usize),
    #[error("more than {0} projected models; use an external counter")]
    CapExceeded(u64),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumerationMode {
    /// Scan all `n^(n²)` tables.
    Exhaustive,
    /// Fill cells row by row, pruning on falsified ground instances.
    Backtracking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxiomCheck {
    pub satisfied: bool,
    /// Two different unary operations both complete the table to a model.
    pub unary_ambiguous: bool,
}

/// Finds interpretations of constants and the unary operation extending
/// the fully known table in `p`; stops after `want` distinct unary maps.
fn complete_aux(c: &Compiled, p: &mut Partial, want: usize, found: &mut BTreeSet<Vec<u8>>) {
    if found.len() >= want {
        return;
    }
    match c.status(p) {
        Status::Violated => return,
        Status::Satisfied => {
            found.insert(p.unary.iter().map(|u| u.unwrap_or(0)).collect());
            return;
        }
        Status::Open => {}
    }
    let slot = if let Some(i) = p.consts.iter().position(Option::is_none) {
        Slot::Const(i)
    } else if let Some(i) = p.unary.iter().position(Option::is_none) {
        Slot::Unary(i)
    } else {
        return;
    };
    for v in 0..p.n as u8 {
        slot.set(p, Some(v));
        complete_aux(c, p, want, found);
        if found.len() >= want {
            break;
        }
    }
    slot.set(p, None);
}

#[derive(Clone, Copy)]
enum Slot {
    Const(usize),
    Cell(usize),
    Unary(usize),
}

impl Slot {
    fn set(self, p: &mut Partial, v: Option<u8>) {
        match self {
            Slot::Const(i) => p.consts[i] = v,
            Slot::Cell(i) => p.cells[i] = v,
            Slot::Unary(i) => p.unary[i] = v,
        }
    }
}

fn table_partial(c: &Compiled, a: &Magma) -> Partial {
    let mut p = Partial::empty(a.size(), c.num_consts);
    for (slot, &v) in p.cells.iter_mut().zip(a.cells()) {
        *slot = Some(v);
    }
    if !c.uses_unary {
        p.unary.iter_mut().for_each(|u| *u = Some(0));
    }
    p
}

pub fn check_axioms_detailed(ax: &AxiomSet, a: &Magma) -> AxiomCheck {
    let c = Compiled::new(ax);
    let mut p = table_partial(&c, a);
    let mut found = BTreeSet::new();
    let want = if c.uses_unary { 2 } else { 1 };
    complete_aux(&c, &mut p, want, &mut found);
    let unary_ambiguous = c.uses_unary && found.len() > 1;
    if unary_ambiguous {
        log::warn!("{}: unary operation not uniquely determined by table {:?}", ax.name, a.cells());
    }
    AxiomCheck { satisfied: !found.is_empty(), unary_ambiguous }
}

/// True iff some interpretation of the constants and unary operation makes
/// `a` satisfy every clause.
pub fn check_axioms(ax: &AxiomSet, a: &Magma) -> bool {
    let c = Compiled::new(ax);
    let mut p = table_partial(&c, a);
    let mut found = BTreeSet::new();
    complete_aux(&c, &mut p, 1, &mut found);
    !found.is_empty()
}

fn backtrack(c: &Compiled, p: &mut Partial, depth: usize, out: &mut BTreeSet<Magma>) {
    let num_consts = p.consts.len();
    let cells = p.n * p.n;
    if c.status(p) == Status::Violated {
        return;
    }
    if depth == num_consts + cells {
        let mut found = BTreeSet::new();
        complete_aux(c, p, 1, &mut found);
        if !found.is_empty() {
            let table = p.cells.iter().map(|v| v.expect("assigned")).collect();
            out.insert(Magma::new(p.n, table).expect("valid values"));
        }
        return;
    }
    let slot = if depth < num_consts { Slot::Const(depth) } else { Slot::Cell(depth - num_consts) };
    for v in 0..p.n as u8 {
        slot.set(p, Some(v));
        backtrack(c, p, depth + 1, out);
    }
    slot.set(p, None);
}

/// Every axiom-satisfying table of size `n`, once each, in row-major lex order.
pub fn enumerate_models(ax: &AxiomSet, n: usize, mode: EnumerationMode) -> Result<Vec<Magma>, OracleError> {
    if n == 0 || n > 255 {
        return Err(OracleError::SizeGuard { what: "enumeration", n, limit: "1 ≤ n ≤ 255".into() });
    }
    match mode {
        EnumerationMode::Exhaustive => {
            let space = (n as u128).checked_pow((n * n) as u32);
            if space.is_none_or(|s| s > EXHAUSTIVE_LIMIT) {
                return Err(OracleError::SizeGuard {
                    what: "exhaustive enumeration",
                    n,
                    limit: format!("n^(n²) must not exceed {EXHAUSTIVE_LIMIT}"),
                });
            }
            let c = Compiled::new(ax);
            Ok(all_tables(n)
                .filter(|a| {
                    let mut p = table_partial(&c, a);
                    let mut found = BTreeSet::new();
                    complete_aux(&c, &mut p, 1, &mut found);
                    !found.is_empty()
                })
                .collect())
        }
        EnumerationMode::Backtracking => {
            let c = Compiled::new(ax);
            let mut p = Partial::empty(n, c.num_consts);
            if !c.uses_unary {
                p.unary.iter_mut().for_each(|u| *u = Some(0));
            }
            let mut out = BTreeSet::new();
            backtrack(&c, &mut p, 0, &mut out);
            Ok(out.into_iter().collect())
        }
    }
}

/// The ⪯-minimal element of the orbit of `a`.
pub fn orbit_leader(v: &Vectorization, a: &Magma, perms: &[Permutation]) -> Magma {
    perms
        .iter()
        .map(|p| apply_perm(p, a).expect("sizes match"))
        .min_by_key(|b| v.vectorize(b).expect("sizes match"))
        .expect("S_n is non-empty")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoClassReport {
    pub class_count: usize,
    /// One lex-leader per class, in ⪯ order.
    pub leaders: Vec<Magma>,
    pub total_models: usize,
}

fn guard_orbits(n: usize) -> Result<(), OracleError> {
    if n > ORBIT_MAX_N {
        return Err(OracleError::SizeGuard { what: "orbit computation", n, limit: format!("n ≤ {ORBIT_MAX_N}") });
    }
    Ok(())
}

pub fn iso_classes(models: &[Magma], v: &Vectorization) -> Result<IsoClassReport, OracleError> {
    let n = v.size();
    if let Some(bad) = models.iter().find(|m| m.size() != n) {
        return Err(OracleError::MixedSizes(n, bad.size()));
    }
    guard_orbits(n)?;
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let mut leaders = BTreeMap::new();
    for a in models {
        let leader = orbit_leader(v, a, &perms);
        leaders.entry(v.vectorize(&leader).expect("sizes match")).or_insert(leader);
    }
    Ok(IsoClassReport { class_count: leaders.len(), leaders: leaders.into_values().collect(), total_models: models.len() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy {
    pub table: Magma,
    pub minimal_under_set: bool,
    pub lex_leader: bool,
    /// A permutation of S_n showing the table is not a lex-leader.
    pub improving_perm: Option<Permutation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub models_checked: usize,
    pub discrepancy: Option<Discrepancy>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.discrepancy.is_none()
    }
}

/// Checks `min_Π(A) ⟺ min_{S_n}(A)` for every model `A` of `ax`.
pub fn verify_canonizing(
    ax: &AxiomSet,
    n: usize,
    v: &Vectorization,
    perms: &[Permutation],
) -> Result<Verdict, OracleError> {
    if n > VERIFY_MAX_N {
        return Err(OracleError::SizeGuard { what: "canonicity verification", n, limit: format!("n ≤ {VERIFY_MAX_N}") });
    }
    if let Some(p) = perms.iter().find(|p| p.size() != n) {
        return Err(OracleError::MixedSizes(n, p.size()));
    }
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let models = enumerate_models(ax, n, EnumerationMode::Backtracking)?;
    for a in &models {
        let minimal_under_set = v.is_min_under(a, perms).expect("sizes match");
        let improving_perm = all
            .iter()
            .find(|p| v.lex_compare(&apply_perm(p, a).expect("sizes match"), a).expect("sizes match").is_lt())
            .cloned();
        let lex_leader = improving_perm.is_none();
        if minimal_under_set != lex_leader {
            return Ok(Verdict {
                models_checked: models.len(),
                discrepancy: Some(Discrepancy { table: a.clone(), minimal_under_set, lex_leader, improving_perm }),
            });
        }
    }
    Ok(Verdict { models_checked: models.len(), discrepancy: None })
}

/// Projected model count by blocking-clause enumeration.
pub fn naive_count(cnf: &CnfInstance, backend: &mut dyn SatBackend, cap: u64) -> Result<u64, OracleError> {
    match backend.count_projected(cnf, cap)? {
        CountOutcome::Exact(k) => Ok(k),
        CountOutcome::CapExceeded(_) => Err(OracleError::CapExceeded(cap)),
    }
}
