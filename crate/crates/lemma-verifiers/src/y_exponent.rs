//! Bookkeeping for the exponent `y` that controls the error-term powers of
//! `y1` and `y2` in the off-diagonal analysis.
//!
//! A case is a tuple `(a1, b1, a2, b2)` of nonnegative derivative counts
//! together with the smoothing parameter `eps`.  With `s_i = a_i + b_i`,
//! `m = min(s1, s2)` and the overshoots `u_i = s_i - m`, the exponent is
//!
//! ```text
//! y = eps (s1 + s2) + 2 m + min(a1, u2) + min(a2, u1) + min(a1, a2)
//!       - 3 (a1 + a2) - 2 (b1 + b2)
//! ```
//!
//! The claims checked here: `y <= -(a1 + a2)/4 - 3 (b1 + b2)/4` for every
//! nonzero tuple when `eps <= 1/4` (so each differentiated term gains a
//! genuine saving), and the exhaustive maximum over the small grid used in
//! the write-up is `-3/2` or better.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use report_types::ScanReport;

/// One evaluated tuple: the inputs, the derived overshoots, and the exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YExponentCase {
    pub a1: u32,
    pub b1: u32,
    pub a2: u32,
    pub b2: u32,
    pub eps: f64,
    /// Overshoot of side 1 over the smaller total, `s1 - min(s1, s2)`.
    pub u1: u32,
    /// Overshoot of side 2 over the smaller total.
    pub u2: u32,
    /// The resulting exponent.
    pub y: f64,
}

/// Evaluates the exponent for one tuple.  Requires `0 < eps <= 1/4`.
pub fn y_exponent(a1: u32, b1: u32, a2: u32, b2: u32, eps: f64) -> YExponentCase {
    assert!(
        eps > 0.0 && eps <= 0.25,
        "eps must lie in (0, 1/4], got {eps}"
    );
    let s1 = a1 + b1;
    let s2 = a2 + b2;
    let m = s1.min(s2);
    let u1 = s1 - m;
    let u2 = s2 - m;
    let gains = (2 * m + a1.min(u2) + a2.min(u1) + a1.min(a2)) as f64;
    let costs = (3 * (a1 + a2) + 2 * (b1 + b2)) as f64;
    let y = eps * f64::from(s1 + s2) + gains - costs;
    YExponentCase {
        a1,
        b1,
        a2,
        b2,
        eps,
        u1,
        u2,
        y,
    }
}

/// Checks the exponent claims over a random sample and an exhaustive grid.
///
/// Part one draws `10^4` tuples with entries up to 20 (seeded, so runs are
/// reproducible) and checks the per-tuple bound
/// `y <= -(a1 + a2)/4 - 3 (b1 + b2)/4`; at `eps = 1/4` the bound is attained
/// exactly whenever `a1 = a2 = 0` and `b1 = b2`.  Part two maximizes `y`
/// exhaustively over `a1 + a2 <= 5`, `b1 + b2 <= 1` and checks the maximum
/// is at most `-3/2`.  The all-zero tuple has `y = 0` and carries no error
/// term to bound, so it is excluded and reported in a note instead.
pub fn y_exhaustive_check(eps: f64) -> ScanReport {
    let mut report = ScanReport::new(
        "y-exponent",
        format!("10^4 random tuples (entries <= 20) and the grid a1+a2 <= 5, b1+b2 <= 1, eps = {eps}"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(0x59455850);
    for _ in 0..10_000 {
        let (a1, b1, a2, b2) = (
            rng.gen_range(0..=20u32),
            rng.gen_range(0..=20u32),
            rng.gen_range(0..=20u32),
            rng.gen_range(0..=20u32),
        );
        if a1 + b1 + a2 + b2 == 0 {
            continue;
        }
        let case = y_exponent(a1, b1, a2, b2, eps);
        let bound = -0.25 * f64::from(a1 + a2) - 0.75 * f64::from(b1 + b2);
        report.check_le(
            format!("random ({a1},{b1},{a2},{b2})"),
            case.y,
            bound,
        );
    }

    let mut max_y = f64::NEG_INFINITY;
    let mut argmax = (0u32, 0u32, 0u32, 0u32);
    for a1 in 0..=5u32 {
        for a2 in 0..=(5 - a1) {
            for b1 in 0..=1u32 {
                for b2 in 0..=(1 - b1) {
                    if a1 + b1 + a2 + b2 == 0 {
                        continue;
                    }
                    let case = y_exponent(a1, b1, a2, b2, eps);
                    report.check_le(
                        format!("grid ({a1},{b1},{a2},{b2})"),
                        case.y,
                        -1.5,
                    );
                    if case.y > max_y {
                        max_y = case.y;
                        argmax = (a1, b1, a2, b2);
                    }
                }
            }
        }
    }
    report.add_stat("grid max y", max_y);
    report.note(format!(
        "grid maximum attained at {argmax:?}; the all-zero tuple is excluded (y = 0, no error term)"
    ));
    report.finalize();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_outer_derivative_costs_eleven_quarters() {
        let case = y_exponent(1, 0, 0, 0, 0.25);
        assert_eq!(case.y, -2.75);
        assert_eq!((case.u1, case.u2), (1, 0));
    }

    #[test]
    fn single_inner_derivative_costs_seven_quarters() {
        let case = y_exponent(0, 1, 0, 0, 0.25);
        assert_eq!(case.y, -1.75);
    }

    #[test]
    fn balanced_outer_pair_costs_five_halves() {
        let case = y_exponent(1, 0, 1, 0, 0.25);
        assert_eq!(case.y, -2.5);
        assert_eq!((case.u1, case.u2), (0, 0));
    }

    #[test]
    fn zero_tuple_has_zero_exponent() {
        assert_eq!(y_exponent(0, 0, 0, 0, 0.25).y, 0.0);
    }

    #[test]
    fn balanced_inner_pair_attains_the_per_tuple_bound() {
        // At eps = 1/4 and a1 = a2 = 0, b1 = b2 = b the exponent equals
        // -3b/2, exactly the claimed bound.
        for b in 1..=4u32 {
            let case = y_exponent(0, b, 0, b, 0.25);
            assert_eq!(case.y, -1.5 * f64::from(b));
        }
    }

    #[test]
    fn grid_maximum_is_exactly_minus_seven_quarters() {
        let report = y_exhaustive_check(0.25);
        assert!(report.passed(), "violations: {:?}", report.violations);
        let max = report
            .stats
            .iter()
            .find(|s| s.name == "grid max y")
            .expect("max stat")
            .value;
        assert_eq!(max, -1.75);
    }

    #[test]
    fn smaller_eps_only_lowers_the_exponent() {
        let tight = y_exponent(2, 1, 1, 0, 0.25).y;
        let loose = y_exponent(2, 1, 1, 0, 0.125).y;
        assert!(loose < tight);
    }

    #[test]
    #[should_panic(expected = "eps")]
    fn oversized_eps_is_rejected() {
        y_exponent(1, 0, 0, 0, 0.3);
    }
}
