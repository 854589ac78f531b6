//! Structural invariants of the principal-part coefficients.

use arith_core::gcd;
use estermann_laurent::{d3_closed_form, d_coeffs_direct};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn top_coefficient_is_positive_and_bounded(eta in 1u64..5000) {
        let d3 = d3_closed_form(eta);
        prop_assert!(d3 > 0.0);
        prop_assert!(d3 <= 1.0 + 1e-15);
        if eta > 1 {
            prop_assert!(d3 < 1.0, "strict below 1 away from eta = 1");
        }
    }

    #[test]
    fn top_coefficient_is_multiplicative(m in 1u64..1000, n in 1u64..1000) {
        prop_assume!(gcd(m, n) == 1);
        let product = d3_closed_form(m) * d3_closed_form(n);
        let joint = d3_closed_form(m * n);
        prop_assert!((joint - product).abs() < 1e-12, "{m}·{n}: {joint} vs {product}");
    }

    #[test]
    fn direct_count_agrees_with_local_product(eta in 1u64..2000) {
        let direct = d_coeffs_direct(eta).d3;
        let closed = d3_closed_form(eta);
        prop_assert!((direct - closed).abs() < 1e-10);
    }
}

#[test]
fn equality_at_one_is_attained_only_there() {
    assert_eq!(d3_closed_form(1), 1.0);
    let runner_up = (2u64..=2000)
        .map(|eta| d3_closed_form(eta))
        .fold(0.0f64, f64::max);
    assert!(runner_up < 1.0, "max below eta=1 value is {runner_up}");
}
