use std::fmt;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

use canon_core::symmetry::OrderKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Complete,
    Incomplete,
    Error,
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::Complete => "complete",
            RunStatus::Incomplete => "incomplete",
            RunStatus::Error => "error",
        })
    }
}

/// One result row: break size and time, model count and counting time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub class: String,
    pub n: usize,
    pub ordering: OrderKind,
    pub break_size: Option<usize>,
    pub break_time_s: Option<f64>,
    pub model_count: Option<u128>,
    pub count_time_s: Option<f64>,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

pub const CSV_HEADER: &str = "class,n,ordering,#,time,#models,mc-time,status";

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn secs(v: &Option<f64>) -> String {
    v.map(|t| format!("{t:.3}")).unwrap_or_default()
}

impl RunReport {
    pub fn new(class: &str, n: usize, ordering: OrderKind) -> RunReport {
        RunReport {
            class: class.to_string(),
            n,
            ordering,
            break_size: None,
            break_time_s: None,
            model_count: None,
            count_time_s: None,
            status: RunStatus::Complete,
            message: None,
        }
    }

    /// Model counts are only meaningful for complete breaks.
    pub fn normalized(mut self) -> RunReport {
        if self.status != RunStatus::Complete {
            self.model_count = None;
        }
        self
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.class,
            self.n,
            self.ordering,
            opt(&self.break_size),
            secs(&self.break_time_s),
            opt(&self.model_count),
            secs(&self.count_time_s),
            self.status
        )
    }

    /// Appends to `<dir>/report.csv` and `<dir>/report.jsonl`.
    pub fn append_to(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        let csv = dir.join("report.csv");
        let fresh = !csv.exists();
        let mut f = OpenOptions::new().create(true).append(true).open(&csv)?;
        if fresh {
            writeln!(f, "{CSV_HEADER}")?;
        }
        writeln!(f, "{}", self.csv_row())?;
        let mut j = OpenOptions::new().create(true).append(true).open(dir.join("report.jsonl"))?;
        writeln!(j, "{}", serde_json::to_string(self).expect("serializable"))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let mut r = RunReport::new("A14", 3, OrderKind::Diagonal);
        r.break_size = Some(2);
        r.break_time_s = Some(0.5);
        r.model_count = Some(24);
        r.count_time_s = Some(0.25);
        assert_eq!(r.csv_row(), "A14,3,diagonal,2,0.500,24,0.250,complete");
        r.status = RunStatus::Incomplete;
        assert_eq!(r.normalized().csv_row(), "A14,3,diagonal,2,0.500,,0.250,incomplete");
    }

    #[test]
    fn files_are_appended() {
        let dir = tempfile::tempdir().unwrap();
        let r = RunReport::new("A8", 2, OrderKind::Row);
        r.append_to(dir.path()).unwrap();
        r.append_to(dir.path()).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
        assert_eq!(csv.lines().count(), 3);
        let json = std::fs::read_to_string(dir.path().join("report.jsonl")).unwrap();
        let back: RunReport = serde_json::from_str(json.lines().next().unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
