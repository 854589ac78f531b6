//! Shared report structures for verification scans.
//!
//! Every scan in the workspace produces a [`ScanReport`]: how many cases
//! were checked, which (if any) violated their bound, and summary
//! statistics such as suprema. The CLI collects reports from the domain
//! crates into an envelope; keeping the report structs in a leaf crate
//! lets every crate emit them without depending on the CLI.

use serde::{Deserialize, Serialize};

/// Overall outcome of a scan or a batch of scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// Some cases ran, some were skipped (e.g. outside a precondition).
    Partial,
}

/// A single case that exceeded its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Human-readable case key, e.g. `"eta=42 lambda=5"`.
    pub case: String,
    pub observed: f64,
    pub bound: f64,
}

/// A named summary statistic, e.g. the supremum of an error over a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedStat {
    pub name: String,
    pub value: f64,
}

/// Outcome of one verification scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ScanReport {
    /// Scan name, stable across runs (used as the envelope sort key).
    pub name: String,
    /// Description of the range scanned, e.g. `"c <= 500, m,n <= 20"`.
    pub range: String,
    /// Number of cases checked.
    pub checked: u64,
    /// Cases that exceeded their bound; empty iff the scan passed.
    pub violations: Vec<Violation>,
    /// Summary statistics (suprema, residuals, measured constants).
    pub stats: Vec<NamedStat>,
    /// Free-form notes (corrected reference values, measured trends).
    pub notes: Vec<String>,
    /// Command that reproduces this scan; filled in by the CLI on failure.
    pub reproducer: Option<String>,
}

impl ScanReport {
    pub fn new(name: impl Into<String>, range: impl Into<String>) -> Self {
        ScanReport {
            name: name.into(),
            range: range.into(),
            ..ScanReport::default()
        }
    }

    /// Record one case requiring `observed <= bound`.
    pub fn check_le(&mut self, case: impl Into<String>, observed: f64, bound: f64) {
        self.checked += 1;
        if !(observed <= bound) {
            self.violations.push(Violation {
                case: case.into(),
                observed,
                bound,
            });
        }
    }

    /// Record one case requiring `|lhs - rhs| <= tol`.
    pub fn check_close(&mut self, case: impl Into<String>, lhs: f64, rhs: f64, tol: f64) {
        self.check_le(case, (lhs - rhs).abs(), tol);
    }

    pub fn add_stat(&mut self, name: impl Into<String>, value: f64) {
        self.stats.push(NamedStat {
            name: name.into(),
            value,
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn status(&self) -> Status {
        if self.passed() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// Sort violations and stats so identical scans serialize identically
    /// regardless of internal evaluation order.
    pub fn finalize(&mut self) {
        self.violations
            .sort_by(|a, b| a.case.cmp(&b.case));
        self.stats
            .sort_by(|a, b| a.name.cmp(&b.name));
    }
}
