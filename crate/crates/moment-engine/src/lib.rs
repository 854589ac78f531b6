//! Evaluator for the smoothed sixth-moment quantity at desk scale.
//!
//! Everything here is organized around one object: the character-family
//! average of |L|⁶ opened by the harmonic summation formula into a
//! diagonal main term plus an off-diagonal remainder.  The pieces are
//!
//! * [`afe`] — the Mellin cutoff weight `U(y)` that truncates the
//!   approximate functional equation,
//! * [`euler`] — the local factors of the diagonal Dirichlet series,
//!   its ninth-power zeta factorization, and the leading residue,
//! * [`diagonal`] — direct summation of the diagonal (floating and
//!   exact-rational), the contour form of its main term, and the
//!   comparison of the two,
//! * [`offdiag`] — the remainder: an explicit sum over small moduli
//!   with every discarded regime covered by a nonnegative tail bound.
//!
//! All evaluators take a [`MomentConfig`] carrying the modulus, the
//! weight, and the truncation knobs, so that a report produced at one
//! setting can be reproduced exactly from its echoed configuration.

pub mod afe;
pub mod diagonal;
pub mod euler;
pub mod offdiag;

pub use afe::{u_weight, u_weight_on_line, UKernel};
pub use diagonal::{
    diagonal_breakdown, diagonal_direct, diagonal_exact, diagonal_exact_bruteforce,
    DiagonalBreakdown, DiagonalSum,
};
pub use euler::{
    diagonal_local_factor, diagonal_q_local_factor, euler_h_at_one, euler_h_partial,
    h_factor_check, r1_leading,
};
pub use offdiag::{moment_bound_estimate, petersson_offdiag_consistency, MomentEstimate};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Rule for truncating the modulus sum in the off-diagonal evaluator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CCutoffMode {
    /// Per-block cutoff `multiplier · q^{−2/3}·√(a₁a₂NM)`, where `N` and
    /// `M` are the block's coefficient ranges.  This is the balance point
    /// at which the Bessel factor starts winning against the square-root
    /// growth of the complete exponential sums; `multiplier` is 1 for
    /// production runs and 2 for the self-consistency doubling check.
    BlockScaled { multiplier: f64 },
    /// The same cutoff for every block, mainly for experiments.
    Fixed(u64),
}

/// Settings shared by the diagonal and off-diagonal evaluators.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MomentConfig {
    /// Prime modulus of the character family.
    pub q: u64,
    /// Weight of the family; odd, at least 3.
    pub k: u32,
    /// Coefficient tuples are kept while `a³b²n ≤ q^{tuple_cutoff_exponent}`.
    /// The natural scale of the cutoff weight is `q^{3/2}`, so the default
    /// exponent `1.5 + 0.1` keeps everything the weight has not yet
    /// suppressed; the discarded mass is estimated and reported.
    pub tuple_cutoff_exponent: f64,
    /// Truncation rule for the off-diagonal modulus sum.
    pub c_cutoff_mode: CCutoffMode,
    /// Height at which the vertical-line integral defining `U` is cut.
    /// The integrand decays like `e^{−3t²}`; 40 is overwhelmingly safe.
    pub mellin_height: f64,
    /// Trapezoid nodes on the half-line of the `U` integral.  Accuracy is
    /// monitored by doubling, so this is a cost knob, not a tolerance.
    pub mellin_nodes: usize,
    /// Largest imaginary part accepted when a mathematically real
    /// quantity is assembled from a complex quadrature.
    pub im_tolerance: f64,
    /// Ceiling on the number of innermost off-diagonal operations; the
    /// evaluator refuses (rather than silently truncates) past it.
    pub term_budget: u64,
}

impl MomentConfig {
    /// Default configuration for modulus `q` and weight `k`.
    pub fn new(q: u64, k: u32) -> Result<Self, MomentError> {
        let config = MomentConfig {
            q,
            k,
            tuple_cutoff_exponent: 1.6,
            c_cutoff_mode: CCutoffMode::BlockScaled { multiplier: 1.0 },
            mellin_height: 40.0,
            mellin_nodes: 2000,
            im_tolerance: 1e-10,
            term_budget: 100_000_000,
        };
        config.validate()?;
        Ok(config)
    }

    /// Checks every invariant the evaluators rely on.
    pub fn validate(&self) -> Result<(), MomentError> {
        if !arith_core::is_prime(self.q) {
            return Err(MomentError::InvalidConfig(format!(
                "modulus must be prime, got {}",
                self.q
            )));
        }
        if self.k < 3 || self.k % 2 == 0 {
            return Err(MomentError::InvalidConfig(format!(
                "weight must be odd and at least 3, got {}",
                self.k
            )));
        }
        let eps = self.tuple_cutoff_exponent - 1.5;
        if !(eps > 0.0 && eps <= 0.25) {
            return Err(MomentError::InvalidConfig(format!(
                "tuple cutoff exponent must lie in (1.5, 1.75], got {}",
                self.tuple_cutoff_exponent
            )));
        }
        match self.c_cutoff_mode {
            CCutoffMode::BlockScaled { multiplier } => {
                if !(multiplier > 0.0 && multiplier.is_finite()) {
                    return Err(MomentError::InvalidConfig(format!(
                        "modulus cutoff multiplier must be positive, got {multiplier}"
                    )));
                }
            }
            CCutoffMode::Fixed(c) => {
                if c == 0 {
                    return Err(MomentError::InvalidConfig(
                        "fixed modulus cutoff must be positive".into(),
                    ));
                }
            }
        }
        if !(self.mellin_height > 0.0) || self.mellin_nodes < 16 {
            return Err(MomentError::InvalidConfig(
                "Mellin quadrature needs positive height and at least 16 nodes".into(),
            ));
        }
        if !(self.im_tolerance > 0.0) {
            return Err(MomentError::InvalidConfig(
                "imaginary-part tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    /// The tuple cutoff `X = q^{tuple_cutoff_exponent}` as a float.
    pub fn tuple_cutoff(&self) -> f64 {
        (self.q as f64).powf(self.tuple_cutoff_exponent)
    }
}

/// Errors shared by the evaluators in this crate.
#[derive(Debug, Error)]
pub enum MomentError {
    /// A configuration field violates its invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// The requested run would exceed the configured operation budget.
    #[error("term budget exceeded: {needed} operations needed, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    /// A quadrature failed its internal consistency check (node doubling
    /// disagreement, or an imaginary part where a real value is forced).
    #[error("quadrature inconsistency: {0}")]
    Quadrature(String),
}
