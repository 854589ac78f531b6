//! The coprime residue count behind the conductor rearrangements:
//!
//!   Σ*_{x mod cℓ, x ≡ a (ℓ)} 1 = c · ∏_{p | c, p ∤ ℓ} (1 − 1/p),
//!
//! where the star restricts x to residues coprime to cℓ and gcd(a, ℓ) = 1.
//! Both sides are computed independently — the left by enumeration, the
//! right by the product formula in exact integer arithmetic (each prime
//! p | c with p ∤ ℓ contributes p^{e−1}(p − 1), so the product is always
//! an integer) — and compared exactly.

use arith_core::{factorize, gcd};
use report_types::ScanReport;

use crate::LemmaError;

/// Both sides of the count: (enumerated, product formula).
///
/// Requires gcd(a, ℓ) = 1; without it the left side is empty for the
/// wrong reason and the identity does not apply.
pub fn sumstar_count(c: u64, ell: u64, a: u64) -> Result<(u64, u64), LemmaError> {
    if c == 0 || ell == 0 {
        return Err(LemmaError::PreconditionViolation(
            "moduli must be positive".into(),
        ));
    }
    if gcd(a, ell) != 1 {
        return Err(LemmaError::PreconditionViolation(format!(
            "gcd(a, ell) = gcd({a}, {ell}) != 1"
        )));
    }
    let modulus = c * ell;
    let residue = a % ell;
    let mut lhs = 0u64;
    for x in 0..modulus {
        if x % ell == residue && gcd(x, modulus) == 1 {
            lhs += 1;
        }
    }
    // c·∏(1−1/p) assembled as an exact integer: p^e ↦ p^{e−1}(p−1) for
    // every p | c not dividing ℓ.
    let mut rhs = 1u64;
    for &(p, e) in &factorize(c).factors {
        if ell % p == 0 {
            rhs *= p.pow(e);
        } else {
            rhs *= p.pow(e - 1) * (p - 1);
        }
    }
    Ok((lhs, rhs))
}

/// Exact equality of both sides over c ≤ c_max, ℓ ≤ ell_max, and every
/// residue a coprime to ℓ.
pub fn sumstar_scan(c_max: u64, ell_max: u64) -> ScanReport {
    let mut report = ScanReport::new(
        "sumstar",
        format!("c <= {c_max}, ell <= {ell_max}, all a coprime to ell"),
    );
    for c in 1..=c_max {
        for ell in 1..=ell_max {
            for a in 0..ell {
                if gcd(a, ell) != 1 {
                    continue;
                }
                let (lhs, rhs) = sumstar_count(c, ell, a)
                    .expect("coprimality was checked before the call");
                report.check_close(
                    format!("c={c} ell={ell} a={a}"),
                    lhs as f64,
                    rhs as f64,
                    0.0,
                );
            }
        }
    }
    report.finalize();
    report
}
