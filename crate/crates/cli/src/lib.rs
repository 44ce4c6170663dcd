//! Driver behind the `canon` binary: computing, reducing, verifying and
//! counting with canonizing sets, with content-addressed artifacts.

pub mod counter;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use canon_core::axiom::{load_theory, AxiomSet, LoadError};
use canon_core::cnf::{emit_dimacs, emit_projection_sidecar, select_backend, CnfInstance, SatBackend};
use canon_core::engine::{
    assemble_break_cnf, compute_canonizing_set, reduce_canonizing_set, theory_hash, CanonizingSet, ComputeOptions,
    EngineError, Limits,
};
use canon_core::ground::ground_theory;
use canon_core::oracle::{verify_canonizing, OracleError, Verdict, DEFAULT_COUNT_CAP};
use canon_core::symmetry::{format_permutation_list, OrderKind, Vectorization};
use thiserror::Error;

pub use counter::{parse_counter_output, CountError, Counter};
pub use report::{RunReport, RunStatus, CSV_HEADER};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) | CliError::Failure(_) => 1,
            CliError::Resource(_) => 2,
            CliError::Usage(_) => 3,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::ResourceLimit(m) => CliError::Resource(m),
            e @ (EngineError::Mismatch { .. } | EngineError::Malformed(_) | EngineError::Incomplete) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            e @ (OracleError::SizeGuard { .. } | OracleError::CapExceeded(_)) => CliError::Resource(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            e @ (CountError::CapExceeded(_) | CountError::Timeout) => CliError::Resource(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Config {
    pub sat_cmd: Option<String>,
    pub counter_cmd: Option<String>,
    pub seed: u64,
    /// Wall-clock budget per computation.
    pub timeout: Option<Duration>,
    pub out_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sat_cmd: None,
            counter_cmd: None,
            seed: 0,
            timeout: Some(Duration::from_secs(600)),
            out_dir: PathBuf::from("canon-out"),
        }
    }
}

impl Config {
    pub fn backend(&self) -> Box<dyn SatBackend> {
        select_backend(self.sat_cmd.as_deref(), self.seed, None)
    }

    pub fn counter(&self, choice: CounterChoice) -> Result<Counter, CliError> {
        let external = |cmd: &String| Counter::External { command: cmd.clone(), timeout: self.timeout };
        match (choice, &self.counter_cmd) {
            (CounterChoice::Builtin, _) | (CounterChoice::Auto, None) => Ok(Counter::Builtin { cap: DEFAULT_COUNT_CAP }),
            (CounterChoice::External | CounterChoice::Auto, Some(cmd)) => Ok(external(cmd)),
            (CounterChoice::External, None) => {
                Err(CliError::Usage("--counter external needs --counter-cmd or CANON_COUNTER_CMD".into()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterChoice {
    /// External when a counter command is configured, builtin otherwise.
    Auto,
    Builtin,
    External,
}

/// `<class>-<hash prefix>-n<n>-<ordering>`, unique per theory, size and order.
pub fn artifact_stem(ax: &AxiomSet, n: usize, order: OrderKind) -> String {
    let name: String = ax.name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    format!("{name}-{}-n{n}-{order}", &theory_hash(ax)[..12])
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

pub fn load_break(path: &Path) -> Result<CanonizingSet, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    CanonizingSet::from_json(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// The theory named explicitly, or else the one recorded in the break file.
pub fn theory_for(class: Option<&str>, cs: &CanonizingSet) -> Result<AxiomSet, CliError> {
    Ok(load_theory(class.unwrap_or(&cs.class))?)
}

#[derive(Debug, Clone)]
pub struct BreakRequest {
    pub class: String,
    pub n: usize,
    pub order: OrderKind,
    pub seed_transpositions: bool,
    pub reduce: bool,
    pub max_iterations: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct BreakOutcome {
    pub set: CanonizingSet,
    pub report: RunReport,
    pub path: PathBuf,
}

/// Computes (and optionally reduces) a canonizing set, writes it as JSON
/// plus a permutation list, and appends a report row.
pub fn run_break(cfg: &Config, req: &BreakRequest) -> Result<BreakOutcome, CliError> {
    let ax = load_theory(&req.class)?;
    if req.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let v = Vectorization::new(req.order, req.n);
    let mut backend = cfg.backend();
    let started = Instant::now();
    let options = ComputeOptions {
        limits: Limits { time: cfg.timeout, max_iterations: req.max_iterations },
        seed_transpositions: req.seed_transpositions,
    };
    let mut cs = compute_canonizing_set(&ax, req.n, &v, &[], backend.as_mut(), &options)?;
    if req.reduce && cs.is_complete() {
        let remaining = cfg.timeout.map(|t| t.saturating_sub(started.elapsed()));
        cs = reduce_canonizing_set(&ax, req.n, &v, &cs, backend.as_mut(), &Limits { time: remaining, max_iterations: None })?;
        if !cs.reduced {
            log::warn!("reduction hit the resource limit; keeping the unreduced set");
        }
    }
    let mut report = RunReport::new(&req.class, req.n, req.order);
    report.break_size = Some(cs.perms.len());
    report.break_time_s = Some(started.elapsed().as_secs_f64());
    report.status = if cs.is_complete() { RunStatus::Complete } else { RunStatus::Incomplete };
    let path = req.out.clone().unwrap_or_else(|| cfg.out_dir.join(format!("{}.break.json", artifact_stem(&ax, req.n, req.order))));
    write_file(&path, cs.to_json().as_bytes())?;
    write_file(&path.with_extension("perms"), format_permutation_list(&cs.perms).as_bytes())?;
    report.append_to(&cfg.out_dir).map_err(|e| io_err(&cfg.out_dir, e))?;
    Ok(BreakOutcome { set: cs, report, path })
}

/// Reduces an existing complete break file in place or into `out`.
pub fn run_reduce(cfg: &Config, class: Option<&str>, path: &Path, out: Option<&Path>) -> Result<CanonizingSet, CliError> {
    let cs = load_break(path)?;
    let ax = theory_for(class, &cs)?;
    let v = Vectorization::new(cs.ordering, cs.n);
    let mut backend = cfg.backend();
    let reduced = reduce_canonizing_set(&ax, cs.n, &v, &cs, backend.as_mut(), &Limits { time: cfg.timeout, max_iterations: None })?;
    if !reduced.reduced {
        return Err(CliError::Resource("reduction did not finish".into()));
    }
    let target = out.unwrap_or(path);
    write_file(target, reduced.to_json().as_bytes())?;
    Ok(reduced)
}

/// The break CNF: the theory plus `A ⪯ π(A)` for the set, projected on cells.
pub fn break_cnf(ax: &AxiomSet, cs: &CanonizingSet) -> Result<CnfInstance, CliError> {
    let mut cnf = CnfInstance::new();
    assemble_break_cnf(ax, cs.n, &Vectorization::new(cs.ordering, cs.n), cs, &mut cnf)?;
    Ok(cnf)
}

pub fn run_count(cfg: &Config, class: Option<&str>, path: &Path, choice: CounterChoice) -> Result<RunReport, CliError> {
    let cs = load_break(path)?;
    let ax = theory_for(class, &cs)?;
    count_set(cfg, &ax, &cs, choice)
}

pub fn count_set(cfg: &Config, ax: &AxiomSet, cs: &CanonizingSet, choice: CounterChoice) -> Result<RunReport, CliError> {
    let cnf = break_cnf(ax, cs)?;
    let counter = cfg.counter(choice)?;
    let mut backend = cfg.backend();
    backend.set_deadline(cfg.timeout.map(|t| Instant::now() + t));
    let started = Instant::now();
    let count = counter.count(&cnf, backend.as_mut())?;
    let mut report = RunReport::new(&cs.class, cs.n, cs.ordering);
    report.break_size = Some(cs.perms.len());
    report.model_count = Some(count);
    report.count_time_s = Some(started.elapsed().as_secs_f64());
    Ok(report)
}

pub fn run_verify(class: Option<&str>, path: &Path) -> Result<Verdict, CliError> {
    let cs = load_break(path)?;
    let ax = theory_for(class, &cs)?;
    cs.check_matches(&ax, cs.n, cs.ordering)?;
    Ok(verify_canonizing(&ax, cs.n, &Vectorization::new(cs.ordering, cs.n), &cs.perms)?)
}

/// Writes the ground theory, with the break when one is given, as DIMACS
/// with a projection line and a `.proj` sidecar. Returns the CNF path.
pub fn run_emit_dimacs(
    cfg: &Config,
    class: &str,
    n: usize,
    order: OrderKind,
    break_file: Option<&Path>,
    out: Option<&Path>,
) -> Result<PathBuf, CliError> {
    let ax = load_theory(class)?;
    let (cnf, n, order) = match break_file {
        Some(p) => {
            let cs = load_break(p)?;
            (break_cnf(&ax, &cs)?, cs.n, cs.ordering)
        }
        None => {
            let mut cnf = CnfInstance::new();
            ground_theory(&ax, n, &mut cnf).map_err(|e| CliError::Usage(e.to_string()))?;
            (cnf, n, order)
        }
    };
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.out_dir.join(format!("{}.cnf", artifact_stem(&ax, n, order))));
    write_file(&path, &emit_dimacs(&cnf, true))?;
    let mut proj = path.clone().into_os_string();
    proj.push(".proj");
    write_file(Path::new(&proj), emit_projection_sidecar(&cnf).as_bytes())?;
    Ok(path)
}

/// One batch job: break (and reduce), then count.
pub fn run_job(cfg: &Config, req: &BreakRequest, choice: CounterChoice) -> RunReport {
    let outcome = match run_break(cfg, req) {
        Ok(o) => o,
        Err(e) => {
            let mut r = RunReport::new(&req.class, req.n, req.order);
            r.status = RunStatus::Error;
            r.message = Some(e.to_string());
            return r;
        }
    };
    let mut report = outcome.report;
    if !outcome.set.is_complete() {
        return report.normalized();
    }
    let ax = match load_theory(&req.class) {
        Ok(ax) => ax,
        Err(e) => {
            report.status = RunStatus::Error;
            report.message = Some(e.to_string());
            return report;
        }
    };
    match count_set(cfg, &ax, &outcome.set, choice) {
        Ok(c) => {
            report.model_count = c.model_count;
            report.count_time_s = c.count_time_s;
        }
        Err(e) => {
            report.status = if matches!(e, CliError::Resource(_)) { RunStatus::Incomplete } else { RunStatus::Error };
            report.message = Some(e.to_string());
        }
    }
    report.normalized()
}

pub fn describe_discrepancy(verdict: &Verdict) -> Option<String> {
    let d = verdict.discrepancy.as_ref()?;
    let why = if d.minimal_under_set {
        format!("minimal under the set but not a lex-leader (decreased by {})", d.improving_perm.as_ref().map(ToString::to_string).unwrap_or_default())
    } else {
        "a lex-leader that the set rejects".to_string()
    };
    Some(format!("witness table ({why}):\n{}", d.table.to_text()))
}
