//! Exact projected model counting through the builtin enumerator or an
//! external counter binary.

use std::io::Write;
use std::time::{Duration, Instant};

use canon_core::cnf::process::{run_on_file, split_command, ProcessError};
use canon_core::cnf::{write_dimacs, CnfInstance, SatBackend, SolveError};
use canon_core::oracle::{naive_count, OracleError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CountError {
    #[error("more than {0} models; configure an external counter with --counter-cmd")]
    CapExceeded(u64),
    #[error("counter timed out")]
    Timeout,
    #[error("counter failed: {0}")]
    Failed(String),
    #[error("could not find an exact count in counter output")]
    NoCount,
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone)]
pub enum Counter {
    Builtin { cap: u64 },
    External { command: String, timeout: Option<Duration> },
}

/// Extracts the count from `s mc N`, `c s exact ... N` or a bare `s N` line.
/// The last such line wins.
pub fn parse_counter_output(stdout: &str) -> Option<u128> {
    let mut found = None;
    for line in stdout.lines() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let value = match toks.as_slice() {
            ["s", "mc", n] => n.parse().ok(),
            ["c", "s", "exact", .., n] => n.parse().ok(),
            ["s", n] => n.parse().ok(),
            _ => None,
        };
        if value.is_some() {
            found = value;
        }
    }
    found
}

impl Counter {
    pub fn count(&self, cnf: &CnfInstance, backend: &mut dyn SatBackend) -> Result<u128, CountError> {
        match self {
            Counter::Builtin { cap } => match naive_count(cnf, backend, *cap) {
                Ok(k) => Ok(k as u128),
                Err(OracleError::CapExceeded(c)) => Err(CountError::CapExceeded(c)),
                Err(OracleError::Solve(e)) => Err(CountError::Solve(e)),
                Err(e) => Err(CountError::Failed(e.to_string())),
            },
            Counter::External { command, timeout } => {
                let mut file = tempfile::Builder::new()
                    .suffix(".cnf")
                    .tempfile()
                    .map_err(|e| CountError::Failed(e.to_string()))?;
                write_dimacs(cnf, true, &mut file).map_err(|e| CountError::Failed(e.to_string()))?;
                file.flush().map_err(|e| CountError::Failed(e.to_string()))?;
                let deadline = timeout.map(|t| Instant::now() + t);
                let out = run_on_file(&split_command(command), file.path(), deadline).map_err(|e| match e {
                    ProcessError::Timeout(_) => CountError::Timeout,
                    other => CountError::Failed(other.to_string()),
                })?;
                if let Some(k) = parse_counter_output(&out.stdout) {
                    return Ok(k);
                }
                if !out.status.success() {
                    return Err(CountError::Failed(format!("{}: {}", out.status, out.stderr.trim())));
                }
                Err(CountError::NoCount)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_conventions() {
        assert_eq!(parse_counter_output("c hello\ns mc 24\n"), Some(24));
        assert_eq!(parse_counter_output("s SATISFIABLE\nc s exact arb int 643460323187\n"), Some(643460323187));
        assert_eq!(parse_counter_output("s 19\n"), Some(19));
        assert_eq!(parse_counter_output("s SATISFIABLE\n"), None);
        assert_eq!(parse_counter_output("s mc 1\ns mc 2\n"), Some(2));
    }
}
