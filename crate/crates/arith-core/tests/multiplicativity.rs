//! Property tests for the multiplicative structure: on coprime pairs the
//! classical arithmetic functions factor, τ_k(mn) = τ_k(m)τ_k(n) and
//! likewise for φ and μ.

use arith_core::{euler_phi, gcd, mobius, tau_k};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn tau_phi_mobius_multiplicative(m in 1u64..=1_000_000, n in 1u64..=1_000_000) {
        prop_assume!(gcd(m, n) == 1);
        prop_assert_eq!(tau_k(m * n, 2), tau_k(m, 2) * tau_k(n, 2));
        prop_assert_eq!(tau_k(m * n, 3), tau_k(m, 3) * tau_k(n, 3));
        prop_assert_eq!(euler_phi(m * n), euler_phi(m) * euler_phi(n));
        prop_assert_eq!(mobius(m * n), mobius(m) * mobius(n));
    }

    #[test]
    fn phi_counts_coprime_residues(n in 1u64..=3_000) {
        let count = (1..=n).filter(|&a| gcd(a, n) == 1).count() as u64;
        prop_assert_eq!(euler_phi(n), count);
    }

    #[test]
    fn mobius_divisor_sum_is_delta(n in 2u64..=200_000) {
        // Σ_{d|n} μ(d) = 0 for n > 1.
        let total: i64 = arith_core::factorize(n)
            .divisors()
            .iter()
            .map(|&d| mobius(d))
            .sum();
        prop_assert_eq!(total, 0);
    }
}
