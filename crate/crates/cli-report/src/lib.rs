//! Library backing the `mver` binary: verification suites, one-off
//! object computation, and the report envelope both are wrapped in.
//!
//! The domain crates do the actual mathematics and each scan there
//! returns a [`report_types::ScanReport`]. This crate owns everything
//! around those calls: resolving a run configuration from a key=value
//! file and command-line flags, mapping suite names to the scans they
//! bundle, collecting the results into a [`ReportEnvelope`], and
//! rendering that envelope as JSON or flat CSV. It performs no
//! numerics of its own beyond one seeded spot-check scan
//! ([`suites::hankel_scan`]) that exists only at this level because it
//! compares two evaluators across crate boundaries.
//!
//! Everything here is deterministic by construction: entries are
//! sorted by case key, maps are ordered, and timestamps are the only
//! varying output (suppressed with `--no-timestamps`), so identical
//! invocations render byte-identical reports.

pub mod compute;
pub mod config;
pub mod envelope;
pub mod suites;

pub use compute::{run_compute, ComputeObject};
pub use config::{OutputFormat, RunConfig};
pub use envelope::{Entry, ReportEnvelope};
pub use suites::{run_suite, Suite};

/// Failure modes of a CLI run, separated by exit code.
///
/// Verification *failures* are not errors — they render as a `FAIL`
/// envelope and exit code 1. Errors are runs that could not produce an
/// envelope at all: malformed requests exit 2, numerical breakdowns
/// (a quadrature that refused to stabilize, a blown operation budget)
/// exit 3.
#[derive(Debug)]
pub enum CliError {
    /// The request itself is malformed: unknown config key, missing
    /// required flag, out-of-domain parameter, unwritable output path.
    Usage(String),
    /// A numerical evaluator gave up rather than return a wrong value.
    Convergence(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Convergence(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    /// Process exit code for this error (2 usage, 3 numerical).
    #[must_use]
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Convergence(_) => 3,
        }
    }
}

impl From<moment_engine::MomentError> for CliError {
    fn from(e: moment_engine::MomentError) -> Self {
        use moment_engine::MomentError;
        match e {
            MomentError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            MomentError::BudgetExceeded { .. } | MomentError::Quadrature(_) => {
                CliError::Convergence(e.to_string())
            }
        }
    }
}

impl From<special_fn::SpecialFnError> for CliError {
    fn from(e: special_fn::SpecialFnError) -> Self {
        use special_fn::SpecialFnError;
        match e {
            SpecialFnError::DomainViolation(_)
            | SpecialFnError::PoleAtNonpositiveInteger(_)
            | SpecialFnError::PoleAtOne => CliError::Usage(e.to_string()),
            SpecialFnError::ConvergenceFailure(_) | SpecialFnError::NonFinite(_) => {
                CliError::Convergence(e.to_string())
            }
        }
    }
}

impl From<char_expsums::CharError> for CliError {
    fn from(e: char_expsums::CharError) -> Self {
        CliError::Usage(e.to_string())
    }
}
