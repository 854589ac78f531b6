//! Hurwitz zeta by Euler–Maclaurin continuation, and Riemann ζ with
//! derivatives via Cauchy extraction.
//!
//! The Euler–Maclaurin form used, with N chosen from |s|,
//!
//! ζ(s, r) = Σ_{n<N} (n+r)^{−s} + (N+r)^{1−s}/(s−1) + (N+r)^{−s}/2
//!         + Σ_{j=1}^{J} B_{2j}/(2j)! · s(s+1)⋯(s+2j−2) · (N+r)^{−s−2j+1},
//!
//! converges for every s ≠ 1 and delivers relative 1e−9 or better on the
//! working domain |s − 1| ≥ 1e−3, |Im s| ≤ 50 (and comfortably beyond;
//! J = 12 correction terms are kept).

use crate::{AccuracySpec, ComplexVal, SpecialFnError};
use num_complex::Complex64;

/// B_{2j}/(2j)! for j = 1..12.
const EM_COEFF: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
    43_867.0 / 5_109_094_217_170_944_000.0,
    -174_611.0 / 802_857_662_698_291_200_000.0,
    854_513.0 / 155_112_100_433_309_859_840_000.0,
    -236_364_091.0 / 1_693_824_136_731_743_669_452_800_000.0,
];

/// Hurwitz zeta ζ(s, r) for r ∈ (0, 1], s ≠ 1, with explicit accuracy
/// parameters.
pub fn hurwitz_zeta_with(
    spec: &AccuracySpec,
    s: ComplexVal,
    r: f64,
) -> Result<ComplexVal, SpecialFnError> {
    spec.validate()?;
    if !(r > 0.0 && r <= 1.0) {
        return Err(SpecialFnError::DomainViolation(format!(
            "hurwitz_zeta shift r = {r} outside (0, 1]"
        )));
    }
    if (s - 1.0).norm() < 1e-12 {
        return Err(SpecialFnError::PoleAtOne);
    }
    // N large enough that the Euler–Maclaurin tail (governed by
    // |s + 2J| / 2π(N+r)) is far below the target accuracy.
    let n_terms = (2.0 * s.norm()).ceil().max(20.0) as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 0..n_terms {
        sum += (-s * (n as f64 + r).ln()).exp();
    }
    let base = n_terms as f64 + r;
    let log_base = base.ln();
    // Boundary and pole terms.
    sum += ((1.0 - s) * log_base).exp() / (s - 1.0);
    let pow_minus_s = (-s * log_base).exp();
    sum += 0.5 * pow_minus_s;
    // Correction terms: B_{2j}/(2j)! · (s)_{2j−1} · base^{−s−2j+1}.
    let mut pochhammer = s; // s(s+1)…(s+2j−2), built incrementally
    let mut power = pow_minus_s / base; // base^{−s−1}, then /base² steps
    for (j, &coeff) in EM_COEFF.iter().enumerate() {
        sum += coeff * pochhammer * power;
        if j + 1 < EM_COEFF.len() {
            let m = 2.0 * (j as f64) + 1.0;
            pochhammer *= (s + m) * (s + m + 1.0);
            power /= base * base;
        }
    }
    if sum.re.is_finite() && sum.im.is_finite() {
        Ok(sum)
    } else {
        Err(SpecialFnError::NonFinite(format!("hurwitz_zeta({s}, {r})")))
    }
}

/// Hurwitz zeta with default accuracy.
pub fn hurwitz_zeta(s: ComplexVal, r: f64) -> Result<ComplexVal, SpecialFnError> {
    hurwitz_zeta_with(&AccuracySpec::default(), s, r)
}

/// Riemann ζ(s) = ζ(s, 1).
pub fn riemann_zeta(s: ComplexVal) -> Result<ComplexVal, SpecialFnError> {
    hurwitz_zeta(s, 1.0)
}

/// j-th derivative of Riemann ζ at s ≠ 1, j ∈ {0, 1, 2}.
///
/// Derivatives are extracted with a Cauchy integral over a circle about
/// s whose radius keeps the pole at 1 well outside; the trapezoid rule
/// on a circle of analyticity converges geometrically, so 64 nodes give
/// far more than the required accuracy.
pub fn riemann_zeta_deriv(j: u32, s: ComplexVal) -> Result<ComplexVal, SpecialFnError> {
    if j > 2 {
        return Err(SpecialFnError::DomainViolation(format!(
            "derivative order {j} > 2"
        )));
    }
    let dist = (s - 1.0).norm();
    if dist < 1e-12 {
        return Err(SpecialFnError::PoleAtOne);
    }
    if j == 0 {
        return riemann_zeta(s);
    }
    let radius = (0.3 * dist).min(0.25);
    let n_nodes = 64usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..n_nodes {
        let theta = 2.0 * core::f64::consts::PI * (m as f64) / (n_nodes as f64);
        let dir = Complex64::from_polar(1.0, theta);
        let val = riemann_zeta(s + radius * dir)?;
        acc += val * Complex64::from_polar(1.0, -(j as f64) * theta);
    }
    let factorial = if j == 1 { 1.0 } else { 2.0 };
    Ok(acc * factorial / (n_nodes as f64 * radius.powi(j as i32)))
}
