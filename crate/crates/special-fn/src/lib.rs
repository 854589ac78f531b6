//! Complex special functions at verification-grade accuracy.
//!
//! The crate provides the analytic building blocks the rest of the
//! workspace assembles into identity checks:
//!
//! * principal-branch `log Γ` over a wide complex rectangle, plus the
//!   Mellin gamma factor γ(s) = (2π)^{−s} Γ(k/2+s)/Γ(k/2),
//! * the Hurwitz zeta function ζ(s, r) by Euler–Maclaurin continuation,
//! * generalized Stieltjes constants γ₀(r), γ₁(r) — the Taylor
//!   coefficients of ζ(s, r) − 1/(s−1) at s = 1,
//! * Riemann ζ and its first two derivatives via Cauchy integrals,
//! * Bessel J of integer order by ascending series (compensated
//!   double-double accumulation) and Hankel's large-argument expansion,
//! * the Mellin-type Hankel-transform moments ∫₀^∞ xᵘ(log x)ʲ J_ν(ax) dx
//!   in closed form, with an oscillatory-quadrature oracle.
//!
//! Everything is pure and allocation-light; accuracy knobs travel in an
//! [`AccuracySpec`].

use num_complex::Complex64;
use thiserror::Error;

pub mod bessel;
pub mod gamma;
pub mod hankel;
pub mod quad;
pub mod stieltjes;
pub mod zeta;

pub use bessel::{bessel_j, bessel_j_integral_rep, bessel_j_zero};
pub use gamma::{digamma, digamma_real, gamma_factor, log_gamma};
pub use hankel::{hankel_moment, hankel_moment_quadrature};
pub use stieltjes::{berndt_check, stieltjes_gamma, stieltjes_gamma_with};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_with, riemann_zeta, riemann_zeta_deriv};

/// Complex double-precision value used throughout the workspace.
pub type ComplexVal = Complex64;

/// The Euler–Mascheroni constant γ = −ψ(1).
pub const EULER_GAMMA: f64 = 0.5772156649015328606;

#[derive(Debug, Error, PartialEq)]
pub enum SpecialFnError {
    #[error("log_gamma pole at nonpositive integer {0}")]
    PoleAtNonpositiveInteger(f64),
    #[error("evaluation at the pole s = 1")]
    PoleAtOne,
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("quadrature did not stabilize: {0}")]
    ConvergenceFailure(String),
    #[error("non-finite value produced in {0}")]
    NonFinite(String),
}

/// Accuracy parameters shared by the iterative evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySpec {
    /// Target relative accuracy of converged results.
    pub rel_tol: f64,
    /// Hard cap on series/quadrature terms before signalling failure.
    pub max_terms: usize,
    /// Radius of the circles used for Laurent/Taylor extraction at s = 1.
    /// Must stay inside the pole-free annulus, i.e. strictly below 1/2.
    pub contour_radius: f64,
}

impl Default for AccuracySpec {
    fn default() -> Self {
        AccuracySpec {
            rel_tol: 1e-9,
            max_terms: 400,
            contour_radius: 0.25,
        }
    }
}

impl AccuracySpec {
    /// Check the stated invariants (tolerance in (0,1), radius in (0,½)).
    pub fn validate(&self) -> Result<(), SpecialFnError> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(SpecialFnError::DomainViolation(format!(
                "rel_tol {} outside (0,1)",
                self.rel_tol
            )));
        }
        if !(self.contour_radius > 0.0 && self.contour_radius < 0.5) {
            return Err(SpecialFnError::DomainViolation(format!(
                "contour_radius {} outside (0, 0.5)",
                self.contour_radius
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_spec_default_is_valid() {
        assert!(AccuracySpec::default().validate().is_ok());
    }

    #[test]
    fn accuracy_spec_rejects_bad_radius() {
        let spec = AccuracySpec {
            contour_radius: 0.5,
            ..AccuracySpec::default()
        };
        assert!(spec.validate().is_err());
    }
}
