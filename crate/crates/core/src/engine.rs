//! Counterexample-guided computation and reduction of canonizing sets.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::axiom::AxiomSet;
use crate::cnf::{CnfInstance, SatBackend, SolveError, SolveResult};
use crate::ground::{decode_model, ground_theory, GroundError, GroundTheory, TableVars};
use crate::magma::Magma;
use crate::symmetry::{
    apply_perm, encode_free_perm, encode_leq_fixed, encode_strict_less_free, transposition_set, OrderKind, PermVars,
    Permutation, SymmetryError, Vectorization,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Solve(SolveError),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("canonizing set is incomplete")]
    Incomplete,
    #[error("canonizing set was computed for {field} {found}, not {expected}")]
    Mismatch { field: &'static str, expected: String, found: String },
    #[error("backend returned an invalid counterexample: {0}")]
    InvalidCounterexample(String),
    #[error("malformed canonizing set: {0}")]
    Malformed(String),
}

impl From<SolveError> for EngineError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::ResourceLimit(m) => EngineError::ResourceLimit(m),
            other => EngineError::Solve(other),
        }
    }
}

/// A model `A` of the theory with `min_Π(A)` and `π(A) ≺ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub table: Magma,
    pub perm: Permutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetStatus {
    Complete,
    Incomplete,
}

impl fmt::Display for SetStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetStatus::Complete => "complete",
            SetStatus::Incomplete => "incomplete",
        })
    }
}

/// Timings are kept out of the serialized form so that repeated runs
/// produce identical files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub iterations: usize,
    pub sat_calls: usize,
    #[serde(skip)]
    pub solver_time: Duration,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonizingSet {
    pub class: String,
    pub n: usize,
    pub ordering: OrderKind,
    pub reduced: bool,
    pub status: SetStatus,
    pub theory_hash: String,
    pub perms: Vec<Permutation>,
    pub stats: Stats,
    /// After reduction: per permutation, a table minimal under the others
    /// but not under it.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Magma>,
}

impl CanonizingSet {
    pub fn is_complete(&self) -> bool {
        self.status == SetStatus::Complete
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CanonizingSet, EngineError> {
        let cs: CanonizingSet = serde_json::from_str(text).map_err(|e| EngineError::Malformed(e.to_string()))?;
        cs.validate()?;
        Ok(cs)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        for (i, p) in self.perms.iter().enumerate() {
            if p.size() != self.n {
                return Err(EngineError::Malformed(format!("permutation {p} has size {}", p.size())));
            }
            if p.is_identity() {
                return Err(EngineError::Malformed("identity permutation included".into()));
            }
            if self.perms[..i].contains(p) {
                return Err(EngineError::Malformed(format!("duplicate permutation {p}")));
            }
        }
        if !self.witnesses.is_empty() && self.witnesses.len() != self.perms.len() {
            return Err(EngineError::Malformed("witness count differs from permutation count".into()));
        }
        Ok(())
    }

    /// Checks that this set was computed for `(ax, n, v)`.
    pub fn check_matches(&self, ax: &AxiomSet, n: usize, kind: OrderKind) -> Result<(), EngineError> {
        let hash = theory_hash(ax);
        if self.theory_hash != hash {
            return Err(EngineError::Mismatch { field: "theory", expected: short(&hash), found: short(&self.theory_hash) });
        }
        if self.n != n {
            return Err(EngineError::Mismatch { field: "size", expected: n.to_string(), found: self.n.to_string() });
        }
        if self.ordering != kind {
            return Err(EngineError::Mismatch { field: "ordering", expected: kind.to_string(), found: self.ordering.to_string() });
        }
        Ok(())
    }
}

fn short(hash: &str) -> String {
    hash.chars().take(12).collect()
}

/// Hex SHA-256 of the theory body; independent of the class name.
pub fn theory_hash(ax: &AxiomSet) -> String {
    let digest = Sha256::digest(ax.body_text().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Limits {
    pub time: Option<Duration>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct ComputeOptions {
    pub limits: Limits,
    /// Start from all transpositions instead of the empty set.
    pub seed_transpositions: bool,
}

/// The theory, a free permutation and `π(A) ≺ A`, shared by every query.
struct QueryBase {
    cnf: CnfInstance,
    vars: TableVars,
    perm: PermVars,
}

impl QueryBase {
    fn new(ax: &AxiomSet, n: usize, v: &Vectorization) -> Result<QueryBase, EngineError> {
        let mut cnf = CnfInstance::new();
        let ground = ground_theory(ax, n, &mut cnf)?;
        let perm = encode_free_perm(&mut cnf, n)?;
        encode_strict_less_free(&mut cnf, v, &ground.vars.cells, &perm)?;
        Ok(QueryBase { cnf, vars: ground.vars, perm })
    }

    fn query(
        &self,
        v: &Vectorization,
        pis: &[Permutation],
        backend: &mut dyn SatBackend,
        stats: &mut Stats,
    ) -> Result<Option<Counterexample>, EngineError> {
        let mut cnf = self.cnf.clone();
        for pi in pis {
            encode_leq_fixed(&mut cnf, v, &self.vars.cells, pi)?;
        }
        let started = Instant::now();
        let result = backend.solve(&cnf, &[]);
        stats.solver_time += started.elapsed();
        stats.sat_calls += 1;
        let model = match result? {
            SolveResult::Unsat => return Ok(None),
            SolveResult::Sat(m) => m,
        };
        let table = decode_model(&model, &self.vars)?;
        let perm = self.perm.decode(&model)?;
        let image = apply_perm(&perm, &table)?;
        if !v.lex_compare(&image, &table)?.is_lt() {
            return Err(EngineError::InvalidCounterexample(format!("{perm} does not decrease the table")));
        }
        if !v.is_min_under(&table, pis)? {
            return Err(EngineError::InvalidCounterexample("table is not minimal under the current set".into()));
        }
        Ok(Some(Counterexample { table, perm }))
    }
}

fn check_n(n: usize, v: &Vectorization) -> Result<(), EngineError> {
    if n == 0 {
        return Err(GroundError::ZeroSize.into());
    }
    if v.size() != n {
        return Err(SymmetryError::SizeMismatch(v.size(), n).into());
    }
    Ok(())
}

/// Looks for a model minimal under `pis` that some permutation still decreases.
pub fn find_counterexample(
    ax: &AxiomSet,
    n: usize,
    v: &Vectorization,
    pis: &[Permutation],
    backend: &mut dyn SatBackend,
) -> Result<Option<Counterexample>, EngineError> {
    check_n(n, v)?;
    QueryBase::new(ax, n, v)?.query(v, pis, backend, &mut Stats::default())
}

fn dedup_init(n: usize, init: &[Permutation]) -> Result<Vec<Permutation>, EngineError> {
    let mut out: Vec<Permutation> = Vec::new();
    for p in init {
        if p.size() != n {
            return Err(SymmetryError::SizeMismatch(p.size(), n).into());
        }
        if !p.is_identity() && !out.contains(p) {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Grows Π by counterexample permutations until no counterexample remains.
///
/// Hitting a limit yields the partial set marked incomplete.
pub fn compute_canonizing_set(
    ax: &AxiomSet,
    n: usize,
    v: &Vectorization,
    init: &[Permutation],
    backend: &mut dyn SatBackend,
    options: &ComputeOptions,
) -> Result<CanonizingSet, EngineError> {
    check_n(n, v)?;
    let started = Instant::now();
    let deadline = options.limits.time.map(|t| started + t);
    backend.set_deadline(deadline);
    let mut perms = dedup_init(n, init)?;
    if options.seed_transpositions {
        for t in transposition_set(n) {
            if !perms.contains(&t) {
                perms.push(t);
            }
        }
    }
    let mut stats = Stats::default();
    let base = QueryBase::new(ax, n, v)?;
    let status = loop {
        if options.limits.max_iterations.is_some_and(|m| stats.iterations >= m) {
            log::warn!("iteration limit reached with {} permutations", perms.len());
            break SetStatus::Incomplete;
        }
        match base.query(v, &perms, backend, &mut stats) {
            Ok(None) => break SetStatus::Complete,
            Ok(Some(ce)) => {
                log::debug!("iteration {}: adding {}", stats.iterations + 1, ce.perm);
                debug_assert!(!v.is_min_under(&ce.table, [&ce.perm]).unwrap());
                perms.push(ce.perm);
                stats.iterations += 1;
            }
            Err(EngineError::ResourceLimit(m)) => {
                log::warn!("resource limit after {} iterations: {m}", stats.iterations);
                break SetStatus::Incomplete;
            }
            Err(e) => return Err(e),
        }
    };
    backend.set_deadline(None);
    stats.wall_time = started.elapsed();
    Ok(CanonizingSet {
        class: ax.name.clone(),
        n,
        ordering: v.kind(),
        reduced: false,
        status,
        theory_hash: theory_hash(ax),
        perms,
        stats,
        witnesses: Vec::new(),
    })
}

/// Drops, oldest first, every permutation whose removal admits no new
/// counterexample. A resource limit returns the input unchanged.
pub fn reduce_canonizing_set(
    ax: &AxiomSet,
    n: usize,
    v: &Vectorization,
    cs: &CanonizingSet,
    backend: &mut dyn SatBackend,
    limits: &Limits,
) -> Result<CanonizingSet, EngineError> {
    if !cs.is_complete() {
        return Err(EngineError::Incomplete);
    }
    cs.check_matches(ax, n, v.kind())?;
    check_n(n, v)?;
    let started = Instant::now();
    backend.set_deadline(limits.time.map(|t| started + t));
    let base = QueryBase::new(ax, n, v)?;
    let mut stats = cs.stats.clone();
    let mut kept: Vec<Permutation> = cs.perms.clone();
    let mut witnesses: Vec<Option<Magma>> = vec![None; kept.len()];
    let mut i = 0;
    while i < kept.len() {
        let mut without = kept.clone();
        without.remove(i);
        match base.query(v, &without, backend, &mut stats) {
            Ok(None) => {
                log::debug!("dropping redundant {}", kept[i]);
                kept.remove(i);
                witnesses.remove(i);
            }
            Ok(Some(ce)) => {
                witnesses[i] = Some(ce.table);
                i += 1;
            }
            Err(EngineError::ResourceLimit(m)) => {
                log::warn!("reduction stopped by resource limit: {m}");
                backend.set_deadline(None);
                let mut original = cs.clone();
                original.reduced = false;
                return Ok(original);
            }
            Err(e) => return Err(e),
        }
    }
    backend.set_deadline(None);
    stats.wall_time += started.elapsed();
    Ok(CanonizingSet {
        perms: kept,
        witnesses: witnesses.into_iter().map(|w| w.expect("every kept permutation has a witness")).collect(),
        reduced: true,
        stats,
        ..cs.clone()
    })
}

/// Grounds the theory and adds `A ⪯ π(A)` for each `π ∈ Π`; the projection
/// is the cell family.
pub fn assemble_break_cnf(
    ax: &AxiomSet,
    n: usize,
    v: &Vectorization,
    cs: &CanonizingSet,
    cnf: &mut CnfInstance,
) -> Result<GroundTheory, EngineError> {
    if !cs.is_complete() {
        return Err(EngineError::Incomplete);
    }
    cs.check_matches(ax, n, v.kind())?;
    check_n(n, v)?;
    let ground = ground_theory(ax, n, cnf)?;
    for pi in &cs.perms {
        encode_leq_fixed(cnf, v, &ground.vars.cells, pi)?;
    }
    Ok(ground)
}
