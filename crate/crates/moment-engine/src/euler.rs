//! Local factors of the diagonal Dirichlet series and its leading residue.
//!
//! At a prime `p` away from the modulus, the diagonal's local factor is
//! a power series in `t = p^{−s}` obtained by summing over exponent
//! tuples `(a₁,b₁,n,a₂,b₂,m)` with `a₁,a₂ ∈ {0,1}` (the Möbius weights
//! kill anything higher) subject to `a₁+b₁ = a₂+b₂` and `a₁+n = a₂+m`,
//! each tuple weighted by `(−1)^{a₁+a₂}` times a product of four
//! ternary divisor counts, at denominator exponent `3a₁+2b₁+n`.  The
//! constraints make that exponent symmetric between the two halves of
//! the tuple, which the enumeration asserts.  The resulting integer
//! coefficients are the same at every such prime; at the modulus itself
//! the coprimality conditions force `a = b = 0` and leave the simpler
//! series `Σ τ₃(qⁿ)² tⁿ`.
//!
//! Dividing by the ninth power of the local zeta factor — multiplying
//! by `(1−t)⁹` — cancels the series to `1 + O(t³)`: the `t¹` and `t²`
//! coefficients vanish identically ([`h_factor_check`]), which is the
//! computable content of the statement that the quotient `H` of the
//! diagonal series by `ζ⁹` continues past `Re s = 1/2`.  Because the
//! quotient's local factors are `1 − t³ + …`, the Euler product for
//! `H(1)` converges like `Σ p^{−3}` and a truncation at `p ≤ 10⁵` is
//! already conservative; the leading residue term is then
//! `H(1)·((3/2)·log q)⁹/9!`.

use arith_core::{is_prime, primes_up_to};
use num_complex::Complex64;
use once_cell::sync::Lazy;

/// Highest denominator exponent carried by the precomputed coefficient
/// table.  At `p = 2` the discarded tail is below `2^{−81}·max-weight`,
/// far under double-precision resolution of the Euler factors.
const GENERIC_DEGREE: usize = 80;

/// `τ₃(p^j)` as an exact integer.
fn tau3_power(j: u64) -> i128 {
    ((j + 1) * (j + 2) / 2) as i128
}

/// Coefficients of the generic local factor, by direct enumeration of
/// the constrained exponent tuples.
fn generic_coefficients(degree: usize) -> Vec<i128> {
    let mut coeff = vec![0i128; degree + 1];
    for a1 in 0u64..=1 {
        for a2 in 0u64..=1 {
            let sign = if (a1 + a2) % 2 == 0 { 1i128 } else { -1i128 };
            let mut b1 = 0u64;
            while 3 * a1 + 2 * b1 <= degree as u64 {
                // First constraint: matching products a₁b₁ = a₂b₂ locally.
                if a1 + b1 >= a2 {
                    let b2 = a1 + b1 - a2;
                    let mut n = 0u64;
                    while 3 * a1 + 2 * b1 + n <= degree as u64 {
                        // Second constraint: matching twists a₁n = a₂m.
                        if a1 + n >= a2 {
                            let m = a1 + n - a2;
                            let e = 3 * a1 + 2 * b1 + n;
                            debug_assert_eq!(e, 3 * a2 + 2 * b2 + m);
                            coeff[e as usize] += sign
                                * tau3_power(b1)
                                * tau3_power(b2)
                                * tau3_power(n)
                                * tau3_power(m);
                        }
                        n += 1;
                    }
                }
                b1 += 1;
            }
        }
    }
    coeff
}

static GENERIC_TABLE: Lazy<Vec<i128>> = Lazy::new(|| generic_coefficients(GENERIC_DEGREE));

/// Power-series coefficients (in `t = p^{−s}`) of the diagonal's local
/// factor at a prime `p` away from the modulus, up to `t^{trunc_order}`.
///
/// The coefficients are the same integers at every admissible prime;
/// the prime argument is validated and keeps call sites explicit about
/// which Euler factor they mean.
///
/// # Panics
/// If `p` is not prime or `trunc_order > 6`.
pub fn diagonal_local_factor(p: u64, trunc_order: usize) -> Vec<i64> {
    assert!(is_prime(p), "local factor asked at non-prime {p}");
    assert!(trunc_order <= 6, "truncation order {trunc_order} > 6");
    GENERIC_TABLE[..=trunc_order]
        .iter()
        .map(|&c| c as i64)
        .collect()
}

/// Power-series coefficients of the local factor at the modulus itself:
/// `Σ τ₃(qⁿ)² tⁿ`, where the coprimality conditions have removed the
/// Möbius-weighted part of the tuple sum.
///
/// # Panics
/// If `trunc_order > 6`.
pub fn diagonal_q_local_factor(trunc_order: usize) -> Vec<i64> {
    assert!(trunc_order <= 6, "truncation order {trunc_order} > 6");
    (0..=trunc_order as u64)
        .map(|n| {
            let t = tau3_power(n) as i64;
            t * t
        })
        .collect()
}

/// Coefficients of `local factor × (1−t)⁹` at a generic prime: the local
/// factor of the quotient by the ninth zeta power.  The `t¹` coefficient
/// vanishing identically is the first-order content of the quotient's
/// analytic continuation; the enumeration also cancels `t²`.
///
/// # Panics
/// If `p` is not prime or `trunc_order > 6`.
pub fn h_factor_check(p: u64, trunc_order: usize) -> Vec<i64> {
    let local = diagonal_local_factor(p, trunc_order);
    let mut out = vec![0i64; trunc_order + 1];
    for (e, slot) in out.iter_mut().enumerate() {
        let mut acc = 0i64;
        for i in 0..=e.min(9) {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            acc += sign * arith_core::binomial(9, i as u64) as i64 * local[e - i];
        }
        *slot = acc;
    }
    out
}

/// Generic local series at real `t = 1/p`, truncated adaptively.
fn generic_series_real(p: u64) -> f64 {
    let inv = 1.0 / p as f64;
    let mut power = 1.0f64;
    let mut acc = 0.0f64;
    for (e, &c) in GENERIC_TABLE.iter().enumerate() {
        let term = c as f64 * power;
        acc += term;
        if e >= 4 && term.abs() < 1e-19 * acc.abs() {
            break;
        }
        power *= inv;
    }
    acc
}

/// Modulus-local series `Σ τ₃(qⁿ)² q^{−n}`.
fn q_series_real(q: u64) -> f64 {
    let inv = 1.0 / q as f64;
    let mut power = 1.0f64;
    let mut acc = 0.0f64;
    for n in 0u64..200 {
        let t = tau3_power(n) as f64;
        let term = t * t * power;
        acc += term;
        if n >= 4 && term < 1e-19 * acc {
            break;
        }
        power *= inv;
    }
    acc
}

/// Partial Euler product for the zeta-compensated value `H(1)`: generic
/// factors over primes `p ≤ p_limit` (excluding the modulus), always
/// multiplied by the modulus-local correction factor.
pub fn euler_h_partial(q: u64, p_limit: u64) -> f64 {
    assert!(is_prime(q), "modulus must be prime, got {q}");
    let mut product = 1.0f64;
    for p in primes_up_to(p_limit) {
        if p == q {
            continue;
        }
        let zeta_comp = (1.0 - 1.0 / p as f64).powi(9);
        product *= generic_series_real(p) * zeta_comp;
    }
    let q_comp = (1.0 - 1.0 / q as f64).powi(9);
    product * q_series_real(q) * q_comp
}

/// `H(1)` with the production truncation `p ≤ 10⁵` and a logarithmic
/// estimate of the discarded tail.  The quotient's local factors are
/// `1 + h₃p^{−3} + …` with `h₃ = −1`, so the missing log-mass is
/// `−Σ_{p>P} p^{−3} ≈ −1/(2P² ln P)` — below `1e−11` here, retained for
/// honesty rather than effect.
pub fn euler_h_at_one(q: u64) -> f64 {
    let p_limit = 100_000u64;
    let h3 = h_factor_of_degree(3) as f64;
    let pl = p_limit as f64;
    let tail_log = h3 * 0.5 / (pl * pl * pl.ln());
    euler_h_partial(q, p_limit) * tail_log.exp()
}

/// Coefficient of `t^e` in the zeta-compensated generic factor, from the
/// full-degree table (not capped at the public truncation order).
fn h_factor_of_degree(e: usize) -> i128 {
    let mut acc = 0i128;
    for i in 0..=e.min(9) {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        acc += sign * arith_core::binomial(9, i as u64) as i128 * GENERIC_TABLE[e - i];
    }
    acc
}

/// Leading term of the diagonal's residue: `H(1) · ((3/2)·log q)⁹ / 9!`.
///
/// The weight enters the residue only through `γ(0)³ = 1`, which is 1
/// for every `k`; the argument is validated so that call sites carry
/// the same signature as the other evaluators.
///
/// # Panics
/// If `q` is not prime or `k` is even or below 3.
pub fn r1_leading(q: u64, k: u32) -> f64 {
    assert!(is_prime(q), "modulus must be prime, got {q}");
    assert!(k >= 3 && k % 2 == 1, "weight must be odd and at least 3");
    let log_term = 1.5 * (q as f64).ln();
    const NINE_FACTORIAL: f64 = 362_880.0;
    euler_h_at_one(q) * log_term.powi(9) / NINE_FACTORIAL
}

/// Generic local series at complex `z = p^{−s}`, truncated adaptively.
fn generic_series_complex(z: Complex64) -> Complex64 {
    let mut power = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, &c) in GENERIC_TABLE.iter().enumerate() {
        let term = power * c as f64;
        acc += term;
        if e >= 4 && term.norm_sqr() < 1e-38 * acc.norm_sqr() {
            break;
        }
        power *= z;
    }
    acc
}

/// Modulus-local series at complex `z = q^{−s}`.
fn q_series_complex(z: Complex64) -> Complex64 {
    let mut power = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0u64..200 {
        let t = tau3_power(n) as f64;
        let term = power * (t * t);
        acc += term;
        if n >= 4 && term.norm_sqr() < 1e-38 * acc.norm_sqr() {
            break;
        }
        power *= z;
    }
    acc
}

/// The zeta-compensated product `H(1+u)` for complex `u` with
/// `Re u > −1/2`, truncated at `p ≤ p_limit`.  Used by the contour
/// evaluation of the full residue, where `u` runs over a small circle.
pub(crate) fn h_value_complex(q: u64, u: Complex64, p_limit: u64) -> Complex64 {
    let s = Complex64::new(1.0, 0.0) + u;
    let mut product = Complex64::new(1.0, 0.0);
    for p in primes_up_to(p_limit) {
        if p == q {
            continue;
        }
        let z = (-s * (p as f64).ln()).exp();
        let zeta_comp = (Complex64::new(1.0, 0.0) - z).powu(9);
        product *= generic_series_complex(z) * zeta_comp;
    }
    let zq = (-s * (q as f64).ln()).exp();
    let q_comp = (Complex64::new(1.0, 0.0) - zq).powu(9);
    product * q_series_complex(zq) * q_comp
}
