//! SAT backends: the bundled CaDiCaL binding and external DIMACS solvers.

use std::io::Write;
use std::time::{Duration, Instant};

use super::dimacs::write_dimacs;
use super::instance::{CnfInstance, Lit, Model, Var};
use super::process::{run_on_file, split_command, ProcessError};
use super::SolveError;

#[derive(Debug, Clone)]
pub enum SolveResult {
    Sat(Model),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SolveResult::Sat(m) => Some(m),
            SolveResult::Unsat => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub incremental: bool,
    pub model_extraction: bool,
    pub seeded: bool,
}

/// Result of projected enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountOutcome {
    Exact(u64),
    /// More than `cap` projected models exist.
    CapExceeded(u64),
}

/// A complete SAT procedure. `solve` returns a total model on SAT; a
/// timeout or crash is a [`SolveError`], never `Unsat`.
pub trait SatBackend: Send {
    fn name(&self) -> String;

    fn capabilities(&self) -> Capabilities;

    /// Wall-clock deadline applied to subsequent calls.
    fn set_deadline(&mut self, deadline: Option<Instant>);

    fn solve(&mut self, cnf: &CnfInstance, assumptions: &[Lit]) -> Result<SolveResult, SolveError>;

    /// Counts models projected onto `cnf.projection()` by blocking clauses.
    fn count_projected(&mut self, cnf: &CnfInstance, cap: u64) -> Result<CountOutcome, SolveError> {
        let projection: Vec<Var> = cnf.projection().map(|p| p.iter().copied().collect()).unwrap_or_default();
        let mut work = cnf.clone();
        let mut count = 0u64;
        loop {
            match self.solve(&work, &[])? {
                SolveResult::Unsat => return Ok(CountOutcome::Exact(count)),
                SolveResult::Sat(model) => {
                    count += 1;
                    if count > cap {
                        return Ok(CountOutcome::CapExceeded(cap));
                    }
                    if projection.is_empty() {
                        return Ok(CountOutcome::Exact(1));
                    }
                    let block: Vec<Lit> =
                        projection.iter().map(|&v| if model.value(v) { v.negative() } else { v.positive() }).collect();
                    work.add_clause(&block);
                }
            }
        }
    }
}

/// Solves `cnf` under `assumptions` with the given backend.
pub fn solve(backend: &mut dyn SatBackend, cnf: &CnfInstance, assumptions: &[Lit]) -> Result<SolveResult, SolveError> {
    backend.solve(cnf, assumptions)
}

/// In-process CaDiCaL. CaDiCaL is deterministic for a fixed clause order,
/// so the seed is recorded but does not alter the search.
#[derive(Debug, Clone)]
pub struct BundledSolver {
    seed: u64,
    call_timeout: Option<Duration>,
    deadline: Option<Instant>,
}

impl BundledSolver {
    pub fn new() -> BundledSolver {
        BundledSolver { seed: 0, call_timeout: None, deadline: None }
    }

    pub fn with_seed(mut self, seed: u64) -> BundledSolver {
        self.seed = seed;
        self
    }

    pub fn with_call_timeout(mut self, timeout: Option<Duration>) -> BundledSolver {
        self.call_timeout = timeout;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn budget(&self) -> Result<Option<f32>, SolveError> {
        let now = Instant::now();
        let mut limit = self.call_timeout;
        if let Some(d) = self.deadline {
            if now >= d {
                return Err(SolveError::ResourceLimit("deadline reached before solving".into()));
            }
            let left = d - now;
            limit = Some(limit.map_or(left, |l| l.min(left)));
        }
        Ok(limit.map(|l| l.as_secs_f32()))
    }

    fn load(&self, cnf: &CnfInstance) -> Result<cadical::Solver<cadical::Timeout>, SolveError> {
        let mut solver: cadical::Solver<cadical::Timeout> = cadical::Solver::new();
        if cnf.num_vars() > 0 {
            solver.reserve(cnf.num_vars() as i32);
        }
        for clause in cnf.clauses() {
            if clause.is_empty() {
                return Err(SolveError::Trivial);
            }
            solver.add_clause(clause.iter().map(|l| l.to_dimacs()));
        }
        Ok(solver)
    }

    fn run(&self, solver: &mut cadical::Solver<cadical::Timeout>, assumptions: &[Lit]) -> Result<bool, SolveError> {
        let budget = self.budget()?;
        solver.set_callbacks(budget.map(cadical::Timeout::new));
        match solver.solve_with(assumptions.iter().map(|l| l.to_dimacs())) {
            Some(sat) => Ok(sat),
            None => Err(SolveError::ResourceLimit("time limit reached".into())),
        }
    }
}

impl Default for BundledSolver {
    fn default() -> Self {
        BundledSolver::new()
    }
}

fn extract_model(solver: &cadical::Solver<cadical::Timeout>, num_vars: u32) -> Model {
    Model::from_values((1..=num_vars).map(|v| solver.value(v as i32).unwrap_or(false)))
}

impl SatBackend for BundledSolver {
    fn name(&self) -> String {
        "bundled-cadical".to_string()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { incremental: true, model_extraction: true, seeded: false }
    }

    fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    fn solve(&mut self, cnf: &CnfInstance, assumptions: &[Lit]) -> Result<SolveResult, SolveError> {
        let mut solver = match self.load(cnf) {
            Ok(s) => s,
            Err(SolveError::Trivial) => return Ok(SolveResult::Unsat),
            Err(e) => return Err(e),
        };
        if self.run(&mut solver, assumptions)? {
            Ok(SolveResult::Sat(extract_model(&solver, cnf.num_vars())))
        } else {
            Ok(SolveResult::Unsat)
        }
    }

    fn count_projected(&mut self, cnf: &CnfInstance, cap: u64) -> Result<CountOutcome, SolveError> {
        let projection: Vec<Var> = cnf.projection().map(|p| p.iter().copied().collect()).unwrap_or_default();
        let mut solver = match self.load(cnf) {
            Ok(s) => s,
            Err(SolveError::Trivial) => return Ok(CountOutcome::Exact(0)),
            Err(e) => return Err(e),
        };
        let mut count = 0u64;
        while self.run(&mut solver, &[])? {
            count += 1;
            if count > cap {
                return Ok(CountOutcome::CapExceeded(cap));
            }
            if projection.is_empty() {
                break;
            }
            let block: Vec<i32> = projection
                .iter()
                .map(|&v| {
                    let id = v.id() as i32;
                    if solver.value(id).unwrap_or(false) { -id } else { id }
                })
                .collect();
            solver.add_clause(block);
        }
        Ok(CountOutcome::Exact(count))
    }
}

/// A solver binary driven through `<cmd> <file.cnf>` with standard
/// `s SATISFIABLE` / `v ...` output (exit codes 10/20 as fallback).
#[derive(Debug, Clone)]
pub struct ExternalSolver {
    command: Vec<String>,
    call_timeout: Option<Duration>,
    deadline: Option<Instant>,
}

impl ExternalSolver {
    pub fn new(command: &str) -> ExternalSolver {
        ExternalSolver { command: split_command(command), call_timeout: None, deadline: None }
    }

    pub fn with_call_timeout(mut self, timeout: Option<Duration>) -> ExternalSolver {
        self.call_timeout = timeout;
        self
    }

    fn effective_deadline(&self) -> Option<Instant> {
        let by_call = self.call_timeout.map(|t| Instant::now() + t);
        match (by_call, self.deadline) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// Parses solver stdout into a result over `num_vars` variables.
pub fn parse_solver_output(stdout: &str, exit_code: Option<i32>, num_vars: u32) -> Result<SolveResult, SolveError> {
    let mut status: Option<bool> = None;
    let mut values = vec![false; num_vars as usize];
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            status = match rest.trim() {
                "SATISFIABLE" => Some(true),
                "UNSATISFIABLE" => Some(false),
                "UNKNOWN" => return Err(SolveError::ResourceLimit("solver reported UNKNOWN".into())),
                other => return Err(SolveError::Backend(format!("unexpected status line {other:?}"))),
            };
        } else if let Some(rest) = line.strip_prefix("v ").or_else(|| (line == "v").then_some("")) {
            for word in rest.split_whitespace() {
                let lit: i64 = word.parse().map_err(|_| SolveError::Backend(format!("bad model literal {word:?}")))?;
                if lit == 0 {
                    continue;
                }
                let var = lit.unsigned_abs() as usize;
                if var > num_vars as usize {
                    continue;
                }
                values[var - 1] = lit > 0;
            }
        }
    }
    let status = status.or(match exit_code {
        Some(10) => Some(true),
        Some(20) => Some(false),
        _ => None,
    });
    match status {
        Some(true) => Ok(SolveResult::Sat(Model::from_values(values))),
        Some(false) => Ok(SolveResult::Unsat),
        None => Err(SolveError::Backend(format!("no status line (exit code {exit_code:?})"))),
    }
}

impl SatBackend for ExternalSolver {
    fn name(&self) -> String {
        format!("external:{}", self.command.join(" "))
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities { incremental: false, model_extraction: true, seeded: false }
    }

    fn set_deadline(&mut self, deadline: Option<Instant>) {
        self.deadline = deadline;
    }

    fn solve(&mut self, cnf: &CnfInstance, assumptions: &[Lit]) -> Result<SolveResult, SolveError> {
        let with_units;
        let target = if assumptions.is_empty() {
            cnf
        } else {
            let mut c = cnf.clone();
            for &a in assumptions {
                c.add_unit(a);
            }
            with_units = c;
            &with_units
        };
        let mut file = tempfile::Builder::new()
            .suffix(".cnf")
            .tempfile()
            .map_err(|e| SolveError::Backend(e.to_string()))?;
        write_dimacs(target, false, &mut file).map_err(|e| SolveError::Backend(e.to_string()))?;
        file.flush().map_err(|e| SolveError::Backend(e.to_string()))?;
        let out = run_on_file(&self.command, file.path(), self.effective_deadline()).map_err(|e| match e {
            ProcessError::Timeout(p) => SolveError::ResourceLimit(format!("{p} timed out")),
            other => SolveError::Backend(other.to_string()),
        })?;
        let code = out.status.code();
        if code.is_none() {
            return Err(SolveError::ResourceLimit(format!("solver terminated by signal: {}", out.stderr.trim())));
        }
        let result = parse_solver_output(&out.stdout, code, target.num_vars())?;
        if let SolveResult::Sat(model) = &result {
            if !model.satisfies(target) {
                return Err(SolveError::Backend("external solver returned a non-model".into()));
            }
        }
        Ok(result)
    }
}

/// Picks the external solver when a command is configured, else CaDiCaL.
pub fn select_backend(sat_cmd: Option<&str>, seed: u64, call_timeout: Option<Duration>) -> Box<dyn SatBackend> {
    match sat_cmd.map(str::trim).filter(|c| !c.is_empty()) {
        Some(cmd) => Box::new(ExternalSolver::new(cmd).with_call_timeout(call_timeout)),
        None => Box::new(BundledSolver::new().with_seed(seed).with_call_timeout(call_timeout)),
    }
}
