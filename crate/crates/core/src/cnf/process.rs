//! Subprocess execution with a wall-clock deadline.

use std::io::Read;
use std::path::Path;
use std::process::{Command, ExitStatus, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProcessError {
    #[error("empty command")]
    EmptyCommand,
    #[error("cannot start {0}: {1}")]
    Spawn(String, String),
    #[error("{0} exceeded its time limit")]
    Timeout(String),
    #[error("i/o error while running {0}: {1}")]
    Io(String, String),
}

pub struct ProcessOutput {
    pub status: ExitStatus,
    pub stdout: String,
    pub stderr: String,
}

/// Splits a command string on whitespace into program and leading arguments.
pub fn split_command(command: &str) -> Vec<String> {
    command.split_whitespace().map(str::to_string).collect()
}

/// Runs `<command...> <file>` and collects its output, killing it at `deadline`.
pub fn run_on_file(command: &[String], file: &Path, deadline: Option<Instant>) -> Result<ProcessOutput, ProcessError> {
    let (program, args) = command.split_first().ok_or(ProcessError::EmptyCommand)?;
    let mut child = Command::new(program)
        .args(args)
        .arg(file)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| ProcessError::Spawn(program.clone(), e.to_string()))?;

    let mut stdout = child.stdout.take().expect("piped stdout");
    let mut stderr = child.stderr.take().expect("piped stderr");
    let out_reader = thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    let err_reader = thread::spawn(move || {
        let mut s = String::new();
        stderr.read_to_string(&mut s).map(|_| s)
    });

    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {}
            Err(e) => return Err(ProcessError::Io(program.clone(), e.to_string())),
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            let _ = child.kill();
            let _ = child.wait();
            return Err(ProcessError::Timeout(program.clone()));
        }
        thread::sleep(Duration::from_millis(5));
    };
    let io = |e: std::io::Error| ProcessError::Io(program.clone(), e.to_string());
    let stdout = out_reader.join().expect("reader thread").map_err(io)?;
    let stderr = err_reader.join().expect("reader thread").map_err(io)?;
    Ok(ProcessOutput { status, stdout, stderr })
}
