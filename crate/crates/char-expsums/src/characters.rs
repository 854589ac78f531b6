//! The full group of Dirichlet characters modulo an odd prime q.
//!
//! With g a primitive root mod q, every unit a is g^{dlog[a]}, and the
//! q−1 characters are χ_j(a) = e(j·dlog[a]/(q−1)). Parity is read off
//! from χ_j(−1) = e(j·(q−1)/2/(q−1)) = (−1)^j. All character values are
//! exact roots of unity indexed by integer arithmetic mod q−1.

use crate::{CharError, CompensatedSum};
use arith_core::{factorize, is_prime, pow_mod};
use num_complex::Complex64;
use report_types::ScanReport;

/// Character group data for a prime modulus.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    /// The (odd prime) modulus.
    pub q: u64,
    /// Smallest primitive root mod q.
    pub generator: u64,
    /// dlog[a] solves generator^dlog[a] ≡ a (mod q) for units a;
    /// dlog[0] is a sentinel (u32::MAX).
    pub dlog: Vec<u32>,
    /// Group order q − 1.
    pub order: u64,
    /// e(t/(q−1)) for t = 0..q−1, shared by every character evaluation.
    roots: Vec<Complex64>,
}

impl CharacterTable {
    /// Build the table for an odd prime q.
    pub fn new(q: u64) -> Result<Self, CharError> {
        if q < 3 || !is_prime(q) {
            return Err(CharError::NotPrime(q));
        }
        let order = q - 1;
        let prime_factors: Vec<u64> = factorize(order).factors.iter().map(|&(p, _)| p).collect();
        let generator = (2..q)
            .find(|&g| {
                prime_factors
                    .iter()
                    .all(|&p| pow_mod(g, order / p, q) != 1)
            })
            .expect("every prime has a primitive root");
        let mut dlog = vec![u32::MAX; q as usize];
        let mut acc = 1u64;
        for t in 0..order {
            dlog[acc as usize] = t as u32;
            acc = acc * generator % q;
        }
        let roots = (0..order)
            .map(|t| {
                let angle = 2.0 * std::f64::consts::PI * (t as f64) / (order as f64);
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Ok(CharacterTable {
            q,
            generator,
            dlog,
            order,
            roots,
        })
    }

    /// χ_j(a); zero when q | a.
    #[must_use]
    pub fn chi(&self, j: u64, a: u64) -> Complex64 {
        let a = (a % self.q) as usize;
        if a == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let t = (j % self.order) * u64::from(self.dlog[a]) % self.order;
        self.roots[t as usize]
    }

    /// True iff χ_j(−1) = −1, i.e. j is odd.
    #[must_use]
    pub fn is_odd(&self, j: u64) -> bool {
        j % 2 == 1
    }

    /// Number of characters with χ(−1) = −1.
    #[must_use]
    pub fn odd_count(&self) -> u64 {
        self.order / 2
    }
}

/// The parity-restricted character average
/// (2/φ(q)) Σ_{χ(−1)=(−1)^k} χ(m) χ̄(n).
///
/// Its exact value is 1 when m ≡ n (q) with (mn, q) = 1, (−1)^k when
/// m ≡ −n (q) with (mn, q) = 1, and 0 otherwise.
#[must_use]
pub fn orthogonality_avg(table: &CharacterTable, m: u64, n: u64, k: u32) -> Complex64 {
    let mut acc = CompensatedSum::default();
    for j in 0..table.order {
        if j % 2 == u64::from(k) % 2 {
            acc.add(table.chi(j, m) * table.chi(j, n).conj());
        }
    }
    acc.value() * (2.0 / (table.order as f64))
}

/// Exact three-case target of the orthogonality average.
#[must_use]
pub fn orthogonality_expected(q: u64, m: u64, n: u64, k: u32) -> f64 {
    if m % q == 0 || n % q == 0 {
        return 0.0;
    }
    if m % q == n % q {
        1.0
    } else if (m + n) % q == 0 {
        if k % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else {
        0.0
    }
}

/// Scan the orthogonality relation over all residue pairs mod each q and
/// both parities, comparing the character average to the three-case
/// value at `tol`.
pub fn orthogonality_scan(qs: &[u64], tol: f64) -> Result<ScanReport, CharError> {
    let mut report = ScanReport::new(
        "orthogonality",
        format!("q in {qs:?}, both parities, all residue pairs"),
    );
    let mut sup = 0.0f64;
    for &q in qs {
        let table = CharacterTable::new(q)?;
        for k in [0u32, 1] {
            for m in 0..q {
                for n in 0..q {
                    let got = orthogonality_avg(&table, m, n, k);
                    let expected = orthogonality_expected(q, m, n, k);
                    let err = (got - expected).norm();
                    sup = sup.max(err);
                    report.check_le(format!("q={q} k={k} m={m} n={n}"), err, tol);
                }
            }
        }
    }
    report.add_stat("sup_deviation", sup);
    report.finalize();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_primes() {
        assert_eq!(CharacterTable::new(4).unwrap_err(), CharError::NotPrime(4));
        assert_eq!(CharacterTable::new(1).unwrap_err(), CharError::NotPrime(1));
        assert_eq!(CharacterTable::new(2).unwrap_err(), CharError::NotPrime(2));
    }

    #[test]
    fn q5_has_four_characters_two_odd() {
        let t = CharacterTable::new(5).unwrap();
        assert_eq!(t.order, 4);
        assert_eq!(t.generator, 2);
        let odd = (0..t.order).filter(|&j| t.is_odd(j)).count();
        assert_eq!(odd, 2);
        assert_eq!(t.odd_count(), 2);
    }

    #[test]
    fn q3_has_two_characters_one_odd() {
        let t = CharacterTable::new(3).unwrap();
        assert_eq!(t.order, 2);
        assert_eq!((0..t.order).filter(|&j| t.is_odd(j)).count(), 1);
    }

    #[test]
    fn parity_matches_value_at_minus_one() {
        for q in [3u64, 5, 7, 11, 13, 101] {
            let t = CharacterTable::new(q).unwrap();
            for j in 0..t.order {
                let at_minus_one = t.chi(j, q - 1);
                let expected = if t.is_odd(j) { -1.0 } else { 1.0 };
                assert!(
                    (at_minus_one - expected).norm() < 1e-12,
                    "q={q} j={j}: chi(-1)={at_minus_one}"
                );
            }
        }
    }

    #[test]
    fn multiplicativity_exact_in_dlog_arithmetic() {
        for q in [7u64, 101] {
            let t = CharacterTable::new(q).unwrap();
            for j in 0..t.order {
                for a in 1..q {
                    for b in (1..q).step_by(3) {
                        let lhs = t.chi(j, a * b % q);
                        let rhs = t.chi(j, a) * t.chi(j, b);
                        assert!((lhs - rhs).norm() < 1e-13, "q={q} j={j} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_three_cases_at_q5() {
        let t = CharacterTable::new(5).unwrap();
        let one = orthogonality_avg(&t, 1, 1, 3);
        assert!((one - 1.0).norm() < 1e-12);
        let minus = orthogonality_avg(&t, 2, 3, 3);
        assert!((minus + 1.0).norm() < 1e-12);
        let zero = orthogonality_avg(&t, 2, 4, 3);
        assert!(zero.norm() < 1e-12);
    }

    /// Independent oracle: build each character's value row by explicit
    /// successive powers of e(j/(q−1)) along the generator orbit, then
    /// do the double loop literally — no discrete-log lookups involved.
    #[test]
    fn orthogonality_matches_bruteforce_character_rows() {
        for q in [3u64, 5, 7, 11, 13] {
            let t = CharacterTable::new(q).unwrap();
            let order = q - 1;
            // chi_rows[j][a] by walking the orbit a = g^t.
            let mut rows = vec![vec![Complex64::new(0.0, 0.0); q as usize]; order as usize];
            for (j, row) in rows.iter_mut().enumerate() {
                let omega = Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * j as f64 / order as f64,
                );
                let mut value = Complex64::new(1.0, 0.0);
                let mut residue = 1u64;
                for _ in 0..order {
                    row[residue as usize] = value;
                    residue = residue * t.generator % q;
                    value *= omega;
                }
            }
            for k in [0u32, 1] {
                for m in 0..q {
                    for n in 0..q {
                        let mut brute = Complex64::new(0.0, 0.0);
                        for row in &rows {
                            let sign_ok = (row[(q - 1) as usize]
                                - if k % 2 == 1 { -1.0 } else { 1.0 })
                            .norm()
                                < 1e-9;
                            if sign_ok {
                                brute += row[m as usize] * row[n as usize].conj();
                            }
                        }
                        brute *= 2.0 / order as f64;
                        let got = orthogonality_avg(&t, m, n, k);
                        assert!(
                            (got - brute).norm() < 1e-12,
                            "q={q} k={k} m={m} n={n}: {got} vs {brute}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn scan_passes_at_spec_tolerance() {
        let report = orthogonality_scan(&[3, 5, 7, 11, 13], 1e-12).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(
            report.checked,
            2 * (9 + 25 + 49 + 121 + 169) // both parities, all pairs
        );
    }
}
