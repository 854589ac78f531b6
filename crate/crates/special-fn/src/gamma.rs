//! Log-Gamma and digamma on the complex plane.
//!
//! `log_gamma` uses the Lanczos approximation (g = 7, 9 coefficients) in
//! the half-plane Re z ≥ 1/2 and the reflection formula elsewhere, with
//! the log-sine computed in an overflow-safe factored form so that large
//! imaginary parts never exponentiate. `exp(log_gamma(z))` reproduces
//! Γ(z) to relative 1e−9 or better for Re z ∈ [−20, 50], |Im z| ≤ 100.

use crate::{ComplexVal, SpecialFnError};
use num_complex::Complex64;

/// Lanczos coefficients for g = 7, n = 9 (Godfrey's set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_2PI_HALF: f64 = 0.918_938_533_204_672_74; // ln(2π)/2
const LN_PI: f64 = 1.144_729_885_849_400_2;
const LN_2: f64 = core::f64::consts::LN_2;

fn near_nonpositive_integer(z: Complex64) -> Option<f64> {
    if z.re > 0.4 {
        return None;
    }
    let nearest = z.re.round();
    if nearest <= 0.0 && (z.re - nearest).abs() < 1e-12 && z.im.abs() < 1e-12 {
        Some(nearest)
    } else {
        None
    }
}

/// Lanczos evaluation, valid for Re z ≥ 1/2.
fn log_gamma_lanczos(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    LN_2PI_HALF + (zm1 + 0.5) * t.ln() - t + acc.ln()
}

/// log sin(πz) without overflow: the exponentially large half of the sine
/// is split off as a linear term in z, leaving a logarithm of a quantity
/// of modulus ≤ 2.
fn log_sin_pi(z: Complex64) -> Complex64 {
    let i_pi_z = Complex64::new(0.0, core::f64::consts::PI) * z;
    let log_2i = Complex64::new(LN_2, core::f64::consts::FRAC_PI_2);
    if z.im >= 0.0 {
        // sin πz = e^{−iπz}(e^{2iπz} − 1)/(2i), |e^{2iπz}| ≤ 1.
        -i_pi_z + ((2.0 * i_pi_z).exp() - 1.0).ln() - log_2i
    } else {
        // sin πz = e^{iπz}(1 − e^{−2iπz})/(2i), |e^{−2iπz}| < 1.
        i_pi_z + (1.0 - (-2.0 * i_pi_z).exp()).ln() - log_2i
    }
}

/// Principal-branch log Γ(z).
///
/// Errors with `PoleAtNonpositiveInteger` at z = 0, −1, −2, …
pub fn log_gamma(z: ComplexVal) -> Result<ComplexVal, SpecialFnError> {
    if let Some(n) = near_nonpositive_integer(z) {
        return Err(SpecialFnError::PoleAtNonpositiveInteger(n));
    }
    let value = if z.re >= 0.5 {
        log_gamma_lanczos(z)
    } else {
        // Reflection: log Γ(z) = log π − log sin(πz) − log Γ(1 − z).
        LN_PI - log_sin_pi(z) - log_gamma_lanczos(1.0 - z)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(SpecialFnError::NonFinite(format!("log_gamma({z})")))
    }
}

/// The Mellin gamma factor γ(s) = (2π)^{−s} Γ(k/2 + s)/Γ(k/2).
pub fn gamma_factor(s: ComplexVal, k: u32) -> Result<ComplexVal, SpecialFnError> {
    let half_k = Complex64::new(f64::from(k) / 2.0, 0.0);
    let num = log_gamma(half_k + s)?;
    let den = log_gamma(half_k)?;
    let ln_2pi = 2.0 * LN_2PI_HALF;
    Ok((num - den - s * ln_2pi).exp())
}

/// Asymptotic digamma coefficients: B_{2n}/(2n) for n = 1..7.
const PSI_ASYMP: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// Digamma ψ(z) by upward recurrence into the asymptotic zone Re z ≥ 12.
///
/// Intended for Re z > 0 (all call sites stay in the right half-plane);
/// poles at nonpositive integers surface as infinities upstream.
pub fn digamma(z: ComplexVal) -> ComplexVal {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 12.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv2;
    for &c in &PSI_ASYMP {
        series += c * power;
        power *= inv2;
    }
    shift + z.ln() - 0.5 / z - series
}

/// Digamma on the positive real axis.
pub fn digamma_real(x: f64) -> f64 {
    debug_assert!(x > 0.0, "digamma_real needs x > 0");
    digamma(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::EULER_GAMMA;

    const PI: f64 = core::f64::consts::PI;

    fn lg(re: f64, im: f64) -> Complex64 {
        log_gamma(Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn known_real_values() {
        // Γ(1) = 1, Γ(5) = 24, Γ(1/2) = √π.
        assert!(lg(1.0, 0.0).norm() < 1e-13);
        assert!((lg(5.0, 0.0).re - 24f64.ln()).abs() < 1e-12);
        assert!((lg(0.5, 0.0).re - 0.5 * PI.ln()).abs() < 1e-13);
        assert!(lg(0.5, 0.0).im.abs() < 1e-13);
    }

    #[test]
    fn reflection_region_value() {
        // Γ(−1/2) = −2√π.
        let g = lg(-0.5, 0.0).exp();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-12);
        assert!(g.im.abs() < 1e-12);
    }

    #[test]
    fn poles_are_rejected() {
        for n in [0.0, -1.0, -7.0] {
            assert_eq!(
                log_gamma(Complex64::new(n, 0.0)),
                Err(SpecialFnError::PoleAtNonpositiveInteger(n))
            );
        }
    }

    #[test]
    fn large_imaginary_part_matches_stirling_modulus() {
        // |Γ(it)| = √(π/(t sinh πt)); at t = 50 compare log-modulus.
        let t = 50.0;
        let lhs = lg(0.0 + 1e-30, t).re; // just off the pole line at 0? no: Re=1e-30 < 0.5 uses reflection
        let sinh = (PI * t).exp() / 2.0; // sinh(πt) to this accuracy
        let rhs = 0.5 * (PI / (t * sinh)).ln();
        assert!(
            (lhs - rhs).abs() < 1e-9,
            "log|Γ(50i)|: {lhs} vs {rhs}"
        );
    }

    #[test]
    fn gamma_factor_examples() {
        // γ(0) = 1 for any k.
        for k in [3u32, 5, 9] {
            let g = gamma_factor(Complex64::new(0.0, 0.0), k).unwrap();
            assert!((g - 1.0).norm() < 1e-12, "k={k}");
        }
        // γ(1) for k=3: (2π)^{−1}·Γ(5/2)/Γ(3/2) = 3/(4π).
        let g = gamma_factor(Complex64::new(1.0, 0.0), 3).unwrap();
        assert!((g.re - 3.0 / (4.0 * PI)).abs() < 1e-12);
        assert!(g.im.abs() < 1e-14);
        // Direct composition cross-check at s = 2, k = 5:
        // (2π)^{−2} Γ(9/2)/Γ(5/2) = (2π)^{−2}·(7/2)(5/2) = 35/(16π²).
        let g = gamma_factor(Complex64::new(2.0, 0.0), 5).unwrap();
        assert!((g.re - 35.0 / (16.0 * PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn digamma_known_values() {
        // ψ(1) = −γ; ψ(1/2) = −γ − 2 ln 2; ψ(2) = 1 − γ.
        assert!((digamma_real(1.0) + EULER_GAMMA).abs() < 1e-13);
        assert!((digamma_real(0.5) + EULER_GAMMA + 2.0 * LN_2).abs() < 1e-13);
        assert!((digamma_real(2.0) - (1.0 - EULER_GAMMA)).abs() < 1e-13);
    }

    #[test]
    fn digamma_recurrence_complex() {
        // ψ(z+1) = ψ(z) + 1/z on a few complex points.
        for &(re, im) in &[(0.3, 0.7), (2.5, -4.0), (0.01, 10.0)] {
            let z = Complex64::new(re, im);
            let lhs = digamma(z + 1.0);
            let rhs = digamma(z) + 1.0 / z;
            assert!((lhs - rhs).norm() < 1e-12, "z={z}");
        }
    }
}
