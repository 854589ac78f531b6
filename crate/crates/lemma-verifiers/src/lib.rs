//! Verifiers for the supporting lemmas behind the moment computation:
//! coprime residue counts in progressions, the real-part projector on
//! weight-`k` phases, the smoothed zeta and Bessel-split identities, the
//! divisor-sum `C`-functions with their local derivative calculus, and the
//! bookkeeping for the `y`-exponent that controls the off-diagonal error
//! terms.
//!
//! Each module pairs the object under test with an independent route to the
//! same value — closed form against enumeration, smoothed sum against an
//! analytic reference, finite differences and contour integrals against
//! derivative formulas — and exposes a scan that sweeps the reference grid
//! and returns a [`report_types::ScanReport`].

use thiserror::Error;

pub mod bessel_split;
pub mod cfunc;
pub mod cutoff;
pub mod kappa;
pub mod sumstar;
pub mod y_exponent;
pub mod zeta_identity;

pub use bessel_split::{bessel_split_check, bessel_split_gap, bessel_split_scan};
pub use cfunc::{
    cfunc, cfunc_derivative_crosscheck, cfunc_euler, cfunc_local, cfunc_local_derivative,
    cfunc_local_derivative_contour, finalpiece_scan, FinalPieceGrid, CFUNC_MAX_LOG_POWER,
};
pub use cutoff::SmoothCutoff;
pub use kappa::kappa_apply;
pub use sumstar::{sumstar_count, sumstar_scan};
pub use y_exponent::{y_exhaustive_check, y_exponent, YExponentCase};
pub use zeta_identity::{smoothed_zeta_identity, zeta_identity_scan};

#[derive(Debug, Error, PartialEq)]
pub enum LemmaError {
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
}
