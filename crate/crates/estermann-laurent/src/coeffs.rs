//! Principal-part coefficients D₋₃(η), D₋₂(η), D₋₁(η).
//!
//! The defining double sums run over α₁, α₂ ∈ [1, η] with the indicator
//! η | α₁α₂ and weights built from log η, γ₀(α₁/η) = −ψ(α₁/η), the
//! product γ₀(α₁/η)γ₀(α₂/η), and γ₁(α₁/η). Writing g = gcd(α₁, η) and
//! d = η/g, the admissible α₁ in class g are ga with a ≤ d coprime to d,
//! and the admissible α₂ are the g multiples of d — so every double sum
//! collapses to divisor sums over the class sums
//!
//!   S₀(d) = Σ_{a ≤ d, (a,d)=1} γ₀(a/d),   S₁(d) = Σ_{a ≤ d, (a,d)=1} γ₁(a/d),
//!
//! which in turn have closed forms by Möbius inversion of the full-range
//! sums: Σ_{b ≤ m} γ₀(b/m) = m(γ + log m) and Σ_{b ≤ m} γ₁(b/m) =
//! m(γ₁(1) + γ log m + (log m)²/2), both read off from the dissection
//! Σ_b ζ(s, b/m) = m^s ζ(s) expanded at s = 1. No digamma calls remain
//! in the production path; the per-fraction evaluation survives only in
//! the test oracle below.

use arith_core::{euler_phi, factorize, mobius};
use serde::{Deserialize, Serialize};
use special_fn::EULER_GAMMA;

/// Taylor coefficient of ζ(s) − 1/(s−1) at s = 1 in degree one; frozen
/// here and cross-checked against the contour evaluator in tests.
pub const GAMMA_ONE: f64 = 0.072_815_845_483_676_72;

/// The three principal-part coefficients at a fixed modulus η. They do
/// not depend on the twist numerator; the contour extraction verifies
/// that independence numerically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentTriple {
    pub eta: u64,
    /// Coefficient of (s−1)^{−3}; positive, ≤ 1 with equality iff η = 1,
    /// and multiplicative across coprime moduli.
    pub d3: f64,
    /// Coefficient of (s−1)^{−2}.
    pub d2: f64,
    /// Coefficient of (s−1)^{−1}.
    pub d1: f64,
}

/// Full-range sum Σ_{b=1..m} γ₀(b/m) = m(γ + log m).
fn t0(m: u64) -> f64 {
    let mf = m as f64;
    mf * (EULER_GAMMA + mf.ln())
}

/// Full-range sum Σ_{b=1..m} γ₁(b/m) = m(γ₁ + γ log m + (log m)²/2).
fn t1(m: u64) -> f64 {
    let mf = m as f64;
    let l = mf.ln();
    mf * (GAMMA_ONE + EULER_GAMMA * l + 0.5 * l * l)
}

/// Coprime-restricted class sum S₀(d) = Σ_{e|d} μ(e) T₀(d/e).
pub(crate) fn s0(d: u64) -> f64 {
    factorize(d)
        .divisors()
        .into_iter()
        .map(|e| mobius(e) as f64 * t0(d / e))
        .sum()
}

/// Coprime-restricted class sum S₁(d) = Σ_{e|d} μ(e) T₁(d/e).
pub(crate) fn s1(d: u64) -> f64 {
    factorize(d)
        .divisors()
        .into_iter()
        .map(|e| mobius(e) as f64 * t1(d / e))
        .sum()
}

/// Evaluate the three defining double sums, restructured by gcd classes.
#[must_use]
pub fn d_coeffs_direct(eta: u64) -> LaurentTriple {
    assert!(eta >= 1);
    let divisors = factorize(eta).divisors();
    let eta_sq = (eta * eta) as f64;
    let log_eta = (eta as f64).ln();

    // Pair count: Σ_{g|η} φ(η/g)·g, written below over d = η/g.
    let mut pairs = 0.0;
    // Σ over classes of the α₁-only weights, each α₁ repeated g times.
    let mut sum_s0 = 0.0; // Σ (η/d)·S₀(d)
    let mut sum_s1 = 0.0; // Σ (η/d)·S₁(d)
    let mut sum_phi = 0.0; // Σ (η/d)·φ(d)
    let mut cross = 0.0; // Σ T₀(g)·S₀(η/g)
    for &d in &divisors {
        let g = eta / d;
        let gf = g as f64;
        pairs += gf * euler_phi(d) as f64;
        sum_s0 += gf * s0(d);
        sum_s1 += gf * s1(d);
        sum_phi += gf * euler_phi(d) as f64;
        cross += t0(g) * s0(d);
    }

    let d3 = pairs / eta_sq;
    let d2 = 3.0 * (sum_s0 - sum_phi * log_eta) / eta_sq;
    let d1 = (4.5 * log_eta * log_eta * sum_phi - 9.0 * log_eta * sum_s0
        + 3.0 * sum_s1
        + 3.0 * cross)
        / eta_sq;
    LaurentTriple { eta, d3, d2, d1 }
}

/// Multiplicative closed form for D₋₃: at each p^r ∥ η the local factor
/// is ((r+1)/p^r)(1 − r/(p(r+1))).
#[must_use]
pub fn d3_closed_form(eta: u64) -> f64 {
    assert!(eta >= 1);
    let mut value = 1.0;
    for (p, r) in factorize(eta).factors {
        let pf = p as f64;
        let rf = r as f64;
        value *= (rf + 1.0) / pf.powi(r as i32) * (1.0 - rf / (pf * (rf + 1.0)));
    }
    value
}

/// Literal O(η²) evaluation of the defining sums with one digamma or
/// contour-γ₁ call per fraction. Test-only oracle: keep η ≤ 300.
#[must_use]
pub fn d_coeffs_naive(eta: u64) -> LaurentTriple {
    assert!(eta >= 1);
    let log_eta = (eta as f64).ln();
    let gamma0: Vec<f64> = (0..=eta)
        .map(|a| {
            if a == 0 {
                0.0
            } else {
                -special_fn::digamma_real(a as f64 / eta as f64)
            }
        })
        .collect();
    let mut d3 = 0.0;
    let mut d2 = 0.0;
    let mut d1 = 0.0;
    for a1 in 1..=eta {
        let g0 = gamma0[a1 as usize];
        let g1 = crate::gamma1_of_fraction(a1, eta);
        for a2 in 1..=eta {
            if (a1 * a2) % eta != 0 {
                continue;
            }
            d3 += 1.0;
            d2 += 3.0 * g0 - 3.0 * log_eta;
            d1 += 4.5 * log_eta * log_eta - 9.0 * g0 * log_eta
                + 3.0 * g0 * gamma0[a2 as usize]
                + 3.0 * g1;
        }
    }
    let eta_sq = (eta * eta) as f64;
    LaurentTriple {
        eta,
        d3: d3 / eta_sq,
        d2: d2 / eta_sq,
        d1: d1 / eta_sq,
    }
}
