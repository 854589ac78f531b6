//! Classical and character-twisted Kloosterman sums with exact phases.
//!
//! S(m, n; M) = Σ*_{a mod M} e((am + ān)/M), the star restricting to
//! units and ā denoting the inverse of a mod M; the twisted variant
//! S_χ(m, n; cq) inserts χ(a) for a character mod q. Verification scans
//! check the divisor-constant Weil bound |S| ≤ τ₂(M)√M·√gcd(m,n,M) and
//! the Chinese-remainder factorization across coprime modulus splits.

use crate::{unit_phase, CompensatedSum};
use arith_core::{gcd, mod_inverse, tau_k};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use report_types::ScanReport;

use crate::characters::CharacterTable;

/// One evaluated Kloosterman sum with its parameters.
#[derive(Debug, Clone)]
pub struct KloostermanValue {
    pub value: Complex64,
    /// The full modulus of the sum (cq for twisted sums).
    pub modulus: u64,
    pub m: u64,
    pub n: u64,
    /// Character index j for twisted sums, None for classical ones.
    pub chi_index: Option<u64>,
}

impl KloostermanValue {
    /// The trivial bound |S| ≤ M always holds; additionally classical
    /// sums are real (pairing a ↔ M−a conjugates each term).
    #[must_use]
    pub fn satisfies_trivial_bound(&self) -> bool {
        self.value.norm() <= self.modulus as f64 + 1e-9
    }
}

/// Inverse table for all units mod m (entries for non-units stay 0).
fn inverse_table(m: u64) -> Vec<u64> {
    let mut inv = vec![0u64; m.max(1) as usize];
    for a in 0..m {
        if gcd(a, m) == 1 {
            inv[a as usize] = mod_inverse(a, m).expect("unit is invertible");
        }
    }
    if m == 1 {
        inv[0] = 0;
    }
    inv
}

/// Classical S(m, n; modulus) by direct summation over units.
#[must_use]
pub fn kloosterman(m: u64, n: u64, modulus: u64) -> KloostermanValue {
    assert!(modulus >= 1);
    let inv = inverse_table(modulus);
    let mut acc = CompensatedSum::default();
    for a in 0..modulus.max(1) {
        if gcd(a, modulus) == 1 {
            let phase = i128::from(a) * i128::from(m) + i128::from(inv[a as usize]) * i128::from(n);
            acc.add(unit_phase(phase, modulus));
        }
    }
    KloostermanValue {
        value: acc.value(),
        modulus,
        m,
        n,
        chi_index: None,
    }
}

/// Twisted S_χ(m, n; cq) = Σ*_{a mod cq} χ_j(a) e((am + ān)/cq).
#[must_use]
pub fn kloosterman_twisted(
    m: u64,
    n: u64,
    c: u64,
    table: &CharacterTable,
    j: u64,
) -> KloostermanValue {
    let modulus = c * table.q;
    let inv = inverse_table(modulus);
    let mut acc = CompensatedSum::default();
    for a in 0..modulus {
        if gcd(a, modulus) == 1 {
            let phase = i128::from(a) * i128::from(m) + i128::from(inv[a as usize]) * i128::from(n);
            acc.add(table.chi(j, a) * unit_phase(phase, modulus));
        }
    }
    KloostermanValue {
        value: acc.value(),
        modulus,
        m,
        n,
        chi_index: Some(j),
    }
}

/// The Weil-bound comparison for one sum: (|S(m,n;c)|, τ₂(c)√c·√gcd(m,n,c)).
#[must_use]
pub fn weil_check(m: u64, n: u64, c: u64) -> (f64, f64) {
    let s = kloosterman(m, n, c).value.norm();
    let bound = tau_k(c, 2) as f64 * (c as f64).sqrt() * (gcd(gcd(m, n), c) as f64).sqrt();
    (s, bound)
}

/// Weil-bound scan over all (m, n, c) with c ≤ c_max, 1 ≤ m, n ≤ mn_max.
///
/// Inner loops share one inverse table and one phase table per modulus,
/// so the whole range costs table lookups and additions only.
#[must_use]
pub fn weil_scan(c_max: u64, mn_max: u64) -> ScanReport {
    let mut report = ScanReport::new(
        "kloosterman-weil",
        format!("c <= {c_max}, 1 <= m,n <= {mn_max}"),
    );
    let mut sup_ratio = 0.0f64;
    let mut arg_sup = String::new();
    for c in 1..=c_max {
        let inv = inverse_table(c);
        let units: Vec<u64> = (0..c.max(1)).filter(|&a| gcd(a, c) == 1).collect();
        let phases: Vec<Complex64> = (0..c.max(1)).map(|t| unit_phase(i128::from(t), c)).collect();
        let tau = tau_k(c, 2) as f64;
        let sqrt_c = (c as f64).sqrt();
        for m in 1..=mn_max {
            for n in 1..=mn_max {
                let mut acc = CompensatedSum::default();
                for &a in &units {
                    let t = (a * (m % c.max(1)) + inv[a as usize] * (n % c.max(1))) % c.max(1);
                    acc.add(phases[t as usize]);
                }
                let observed = acc.value().norm();
                let bound = tau * sqrt_c * (gcd(gcd(m, n), c) as f64).sqrt() + 1e-9;
                report.check_le(format!("c={c} m={m} n={n}"), observed, bound);
                let ratio = observed / bound;
                if ratio > sup_ratio {
                    sup_ratio = ratio;
                    arg_sup = format!("c={c} m={m} n={n}");
                }
            }
        }
    }
    report.add_stat("sup_ratio_to_bound", sup_ratio);
    report.note(format!("ratio supremum attained at {arg_sup}"));
    report.finalize();
    report
}

/// Chinese-remainder magnitude split: |S(m, n; c₁c₂)| against
/// |S(c̄₂m, c̄₂n; c₁)|·|S(c̄₁m, c̄₁n; c₂)| for coprime c₁, c₂.
#[must_use]
pub fn kloosterman_crt_split(m: u64, n: u64, c1: u64, c2: u64) -> (f64, f64) {
    assert_eq!(gcd(c1, c2), 1, "split moduli must be coprime");
    let joint = kloosterman(m, n, c1 * c2).value.norm();
    let c2_bar = mod_inverse(c2 % c1.max(1), c1).expect("coprime");
    let c1_bar = mod_inverse(c1 % c2.max(1), c2).expect("coprime");
    let left = kloosterman(c2_bar * m % c1.max(1), c2_bar * n % c1.max(1), c1)
        .value
        .norm();
    let right = kloosterman(c1_bar * m % c2.max(1), c1_bar * n % c2.max(1), c2)
        .value
        .norm();
    (joint, left * right)
}

/// Randomized CRT-split scan: `count` coprime splits with magnitudes
/// required to agree to `tol`.
#[must_use]
pub fn crt_split_scan(count: usize, seed: u64, tol: f64) -> ScanReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ScanReport::new(
        "kloosterman-crt",
        format!("{count} random coprime splits, moduli up to 60 each"),
    );
    let mut done = 0usize;
    while done < count {
        let c1 = rng.gen_range(1u64..=60);
        let c2 = rng.gen_range(1u64..=60);
        if gcd(c1, c2) != 1 {
            continue;
        }
        let m = rng.gen_range(1u64..=30);
        let n = rng.gen_range(1u64..=30);
        let (joint, split) = kloosterman_crt_split(m, n, c1, c2);
        report.check_close(
            format!("m={m} n={n} c1={c1} c2={c2}"),
            joint,
            split,
            tol,
        );
        done += 1;
    }
    report.finalize();
    report
}
