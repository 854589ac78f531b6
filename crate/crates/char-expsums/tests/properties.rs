//! Randomized structural properties of the exponential-sum evaluators.

use arith_core::gcd;
use char_expsums::{
    conductor_lowering_sides, kloosterman, kloosterman_crt_split, weil_check, CharacterTable,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kloosterman_is_symmetric_and_real(m in 1u64..40, n in 1u64..40, c in 1u64..120) {
        let s = kloosterman(m, n, c);
        let t = kloosterman(n, m, c);
        prop_assert!((s.value - t.value).norm() < 1e-10);
        prop_assert!(s.value.im.abs() < 1e-10);
        prop_assert!(s.satisfies_trivial_bound());
    }

    #[test]
    fn kloosterman_depends_only_on_residues(m in 1u64..30, n in 1u64..30, c in 1u64..80) {
        let s = kloosterman(m, n, c);
        let shifted = kloosterman(m + c, n + 7 * c, c);
        prop_assert!((s.value - shifted.value).norm() < 1e-9);
    }

    #[test]
    fn weil_bound_holds_at_random(m in 1u64..60, n in 1u64..60, c in 1u64..200) {
        let (observed, bound) = weil_check(m, n, c);
        prop_assert!(observed <= bound + 1e-9, "|S({m},{n};{c})| = {observed} > {bound}");
    }

    #[test]
    fn crt_split_magnitudes_agree(m in 1u64..25, n in 1u64..25, c1 in 1u64..40, c2 in 1u64..40) {
        prop_assume!(gcd(c1, c2) == 1);
        let (joint, split) = kloosterman_crt_split(m, n, c1, c2);
        prop_assert!((joint - split).abs() < 1e-9, "{joint} vs {split}");
    }

    #[test]
    fn conductor_lowering_on_random_admissible_tuples(
        c in 1u64..10,
        m in 1u64..7,
        n in 1u64..7,
        u in -12i64..12,
        v in -12i64..12,
        qi in 0usize..3,
    ) {
        let q = [3u64, 5, 7][qi];
        prop_assume!(gcd(c * m * n, q) == 1 && gcd(m * n, c) == 1);
        let (lhs, rhs) = conductor_lowering_sides(c, q, m, n, u, v).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10, "lhs {lhs} vs rhs {rhs}");
    }

    #[test]
    fn character_orthogonality_row_sums(q_idx in 0usize..4, a in 2u64..100) {
        // Σ_j χ_j(a) over all characters is 0 unless a ≡ 1.
        let q = [5u64, 7, 11, 13][q_idx];
        prop_assume!(a % q != 1);
        let table = CharacterTable::new(q).unwrap();
        let mut sum = num_complex::Complex64::new(0.0, 0.0);
        for j in 0..table.order {
            sum += table.chi(j, a);
        }
        prop_assert!(sum.norm() < 1e-10, "Σ_j χ_j({a}) = {sum} for q = {q}");
    }
}
