//! The divisor-sum `C`-functions and their local factors.
//!
//! Both variants are double divisor sums over `gamma | n` and `g | n/gamma`,
//! with `mu(g)` inside and optional log powers attached to each layer:
//!
//! ```text
//! C1(n, z; j1, j2) = (phi(n)/n) * sum_{gamma | n} (gamma/phi(gamma))
//!                        * (log gamma)^j1 / gamma^z
//!                        * sum_{g | n/gamma} mu(g) (log g)^j2 / g^z
//! C2(n, z; j1, j2) = same sum without the totient weights
//! ```
//!
//! Each is multiplicative in `n` when `j1 = j2 = 0`, with local factor
//!
//! ```text
//! C_p(z, s) = p^{-rz} + (1 - p^{-s}) * (v(p) + sum_{t=1..r-1} p^{-tz})
//! ```
//!
//! at `p^r || n`, where `v(p) = 1 - 1/p` for variant 1 and `v(p) = 1` for
//! variant 2, and `s` is the variable that lands on the Moebius layer.  The
//! log powers are `(-1)^{j}` times partial derivatives of the local factor in
//! `z` (outer layer) and `s` (inner layer) evaluated at `s = z`, which is what
//! the closed forms in [`cfunc_local_derivative`] implement.  Two independent
//! cross-checks are provided: tensor finite differences
//! ([`cfunc_derivative_crosscheck`]) and a double Cauchy integral
//! ([`cfunc_local_derivative_contour`]).

use num_complex::Complex64;

use arith_core::{euler_phi, factorize, mobius};

/// Largest log power supported on either layer.
pub const CFUNC_MAX_LOG_POWER: u32 = 2;

fn validate_variant(variant: u8) {
    assert!(
        variant == 1 || variant == 2,
        "variant must be 1 (totient weights) or 2 (plain), got {variant}"
    );
}

fn validate_orders(j1: u32, j2: u32) {
    assert!(
        j1 <= CFUNC_MAX_LOG_POWER && j2 <= CFUNC_MAX_LOG_POWER,
        "log powers capped at {CFUNC_MAX_LOG_POWER}, got ({j1}, {j2})"
    );
}

/// `x^(-w)` for positive integer `x` and complex `w`, via the principal log.
fn int_pow_neg(x: u64, w: Complex64) -> Complex64 {
    (-w * (x as f64).ln()).exp()
}

/// All log-power combinations of one `C`-variant in a single divisor pass;
/// entry `[j1][j2]` is the value with `(log gamma)^j1 (log g)^j2` attached.
fn cfunc_table(variant: u8, n: u64, z: Complex64) -> [[Complex64; 3]; 3] {
    let divisors = factorize(n).divisors();
    // One power table per call: divisors[i]^(-z) at matching index.
    let powers: Vec<Complex64> = divisors.iter().map(|&d| int_pow_neg(d, z)).collect();
    let logs: Vec<f64> = divisors.iter().map(|&d| (d as f64).ln()).collect();
    let zero = Complex64::new(0.0, 0.0);

    let mut table = [[zero; 3]; 3];
    for (gi, &gamma) in divisors.iter().enumerate() {
        let weight = match variant {
            1 => gamma as f64 / euler_phi(gamma) as f64,
            _ => 1.0,
        };
        let cofactor = n / gamma;
        let mut inner = [zero; 3];
        for (di, &g) in divisors.iter().enumerate() {
            if cofactor % g != 0 {
                continue;
            }
            let mu = mobius(g);
            if mu == 0 {
                continue;
            }
            let base = mu as f64 * powers[di];
            let mut log_pow = 1.0;
            for acc in &mut inner {
                *acc += log_pow * base;
                log_pow *= logs[di];
            }
        }
        let outer_base = weight * powers[gi];
        let mut log_pow = 1.0;
        for j1 in 0..3 {
            for j2 in 0..3 {
                table[j1][j2] += log_pow * outer_base * inner[j2];
            }
            log_pow *= logs[gi];
        }
    }

    if variant == 1 {
        let scale = euler_phi(n) as f64 / n as f64;
        for row in &mut table {
            for entry in row {
                *entry *= scale;
            }
        }
    }
    table
}

/// Direct evaluation of either `C`-variant as a literal double divisor sum.
///
/// `variant` selects the totient-weighted sum (1) or the plain sum (2).
/// Requires `n >= 1`, log powers at most [`CFUNC_MAX_LOG_POWER`], and
/// `Re z >= 0` (the regime the proposition bounds live in; the sum itself is
/// finite, but the bound it is checked against, `(log n)^(j1+j2)`, assumes
/// it).
pub fn cfunc(variant: u8, n: u64, z: Complex64, j1: u32, j2: u32) -> Complex64 {
    validate_variant(variant);
    validate_orders(j1, j2);
    assert!(n >= 1, "cfunc requires n >= 1");
    assert!(z.re >= 0.0, "cfunc is checked on Re z >= 0, got {}", z.re);
    cfunc_table(variant, n, z)[j1 as usize][j2 as usize]
}

/// The unit weight the local factor attaches to the `t = 0` term:
/// `1 - 1/p` for variant 1, `1` for variant 2.
fn unit_weight(variant: u8, p: u64) -> f64 {
    match variant {
        1 => 1.0 - 1.0 / p as f64,
        _ => 1.0,
    }
}

/// Local factor `C_p(z, s)` of either variant at a prime power `p^r`.
///
/// `z` is the variable on the outer (gamma) layer, `s` the one on the inner
/// (Moebius) layer; the global function is the product over `p^r || n`
/// evaluated at `s = z`.
pub fn cfunc_local(variant: u8, p: u64, r: u32, z: Complex64, s: Complex64) -> Complex64 {
    validate_variant(variant);
    assert!(r >= 1, "local factor needs r >= 1");
    let v = unit_weight(variant, p);
    let mut middle = Complex64::new(v, 0.0);
    for t in 1..r {
        middle += int_pow_neg(p.pow(t), z);
    }
    int_pow_neg(p.pow(r), z) + (1.0 - int_pow_neg(p, s)) * middle
}

/// Closed form for the partial derivative `d^j1/dz^j1 d^j2/ds^j2 C_p(z, s)`.
///
/// Derivative orders up to [`CFUNC_MAX_LOG_POWER`] on each variable.  The
/// three shapes:
///
/// * pure `z`: `(-log p)^j1 (r^j1 p^{-rz} + (1 - p^{-s}) sum t^j1 p^{-tz})`
/// * pure `s`: `-(-log p)^j2 p^{-s} (v(p) + sum p^{-tz})`
/// * mixed:    `-(-log p)^(j1+j2) p^{-s} sum t^j1 p^{-tz}`
///
/// with every sum over `t = 1..r-1` (empty when `r = 1`).
pub fn cfunc_local_derivative(
    variant: u8,
    p: u64,
    r: u32,
    z: Complex64,
    s: Complex64,
    j1: u32,
    j2: u32,
) -> Complex64 {
    validate_variant(variant);
    validate_orders(j1, j2);
    assert!(r >= 1, "local factor needs r >= 1");
    if j1 == 0 && j2 == 0 {
        return cfunc_local(variant, p, r, z, s);
    }

    let log_p = (p as f64).ln();
    let neg_log = Complex64::new(-log_p, 0.0);
    let t_sum = |j: u32| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in 1..r {
            acc += (t as f64).powi(j as i32) * int_pow_neg(p.pow(t), z);
        }
        acc
    };

    if j2 == 0 {
        let head = (r as f64).powi(j1 as i32) * int_pow_neg(p.pow(r), z);
        return neg_log.powu(j1) * (head + (1.0 - int_pow_neg(p, s)) * t_sum(j1));
    }
    if j1 == 0 {
        let middle = Complex64::new(unit_weight(variant, p), 0.0) + t_sum(0);
        return -neg_log.powu(j2) * int_pow_neg(p, s) * middle;
    }
    -neg_log.powu(j1 + j2) * int_pow_neg(p, s) * t_sum(j1)
}

/// Per-axis finite-difference step and scheme for [`cfunc_derivative_crosscheck`].
///
/// First-order axes use a plain central difference; second-order axes use a
/// two-level Richardson extrapolation of the central second difference, which
/// keeps both truncation and roundoff comfortably below `1e-8` for the primes
/// and exponents the cross-check grid uses.
fn axis_samples(order: u32) -> (f64, Vec<(f64, f64)>) {
    // Each entry is (offset multiplier, stencil weight); the step returned
    // first divides the weights once at the end.
    match order {
        0 => (1.0, vec![(0.0, 1.0)]),
        1 => {
            let h = 1e-3;
            // Richardson of the central first difference: (8f(h) - 8f(-h)
            // - f(2h) + f(-2h)) / (12 h).
            (
                h,
                vec![(1.0, 8.0 / 12.0), (-1.0, -8.0 / 12.0), (2.0, -1.0 / 12.0), (-2.0, 1.0 / 12.0)],
            )
        }
        2 => {
            let h = 3e-3;
            // Richardson of the central second difference:
            // (16 (f(h) + f(-h)) - (f(2h) + f(-2h)) - 30 f(0)) / (12 h^2).
            (
                h,
                vec![
                    (0.0, -30.0 / 12.0),
                    (1.0, 16.0 / 12.0),
                    (-1.0, 16.0 / 12.0),
                    (2.0, -1.0 / 12.0),
                    (-2.0, -1.0 / 12.0),
                ],
            )
        }
        _ => unreachable!("orders are validated at 0..=2"),
    }
}

/// Evaluates the closed-form local derivative alongside a tensor
/// finite-difference approximation at `s = z`, returning `(closed, fd)`.
///
/// The finite-difference side is honest about conditioning: on the
/// cross-check grid (`p <= 7`, `r <= 4`) agreement is `2e-7` or better for
/// every order pair except `(2, 2)`, where the eight-fold cancellation in
/// the tensor stencil floors out near `3e-5` in double precision.  Checks
/// at tighter tolerances, and the `(2, 2)` pair in particular, should use
/// [`cfunc_local_derivative_contour`], which does not degrade with order.
pub fn cfunc_derivative_crosscheck(
    variant: u8,
    p: u64,
    r: u32,
    z: Complex64,
    j1: u32,
    j2: u32,
) -> (Complex64, Complex64) {
    validate_variant(variant);
    validate_orders(j1, j2);
    let closed = cfunc_local_derivative(variant, p, r, z, z, j1, j2);

    let (h1, samples1) = axis_samples(j1);
    let (h2, samples2) = axis_samples(j2);
    let mut fd = Complex64::new(0.0, 0.0);
    for &(m1, w1) in &samples1 {
        for &(m2, w2) in &samples2 {
            let value = cfunc_local(variant, p, r, z + m1 * h1, z + m2 * h2);
            fd += w1 * w2 * value;
        }
    }
    fd /= h1.powi(j1 as i32) * h2.powi(j2 as i32);
    (closed, fd)
}

/// High-order oracle for the local derivatives: a double Cauchy integral
/// over circles of radius `rho` around `(z, z)`, evaluated by the trapezoid
/// rule with `nodes` points per circle.
///
/// The local factor is entire in both variables, so the trapezoid sum
/// converges geometrically; 32 nodes and `rho = 0.5` already reach full
/// double precision for every order pair on the cross-check grid.
pub fn cfunc_local_derivative_contour(
    variant: u8,
    p: u64,
    r: u32,
    z: Complex64,
    j1: u32,
    j2: u32,
) -> Complex64 {
    validate_variant(variant);
    validate_orders(j1, j2);
    const NODES: usize = 32;
    const RHO: f64 = 0.5;

    let factorial = |j: u32| -> f64 { (1..=j).map(f64::from).product::<f64>().max(1.0) };
    let omega = |a: usize| -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * a as f64 / NODES as f64;
        Complex64::new(theta.cos(), theta.sin())
    };

    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..NODES {
        let wa = omega(a);
        for b in 0..NODES {
            let wb = omega(b);
            let value = cfunc_local(variant, p, r, z + RHO * wa, z + RHO * wb);
            // Dividing by omega^j rather than multiplying by its conjugate
            // keeps the phases exact for the roots of unity.
            acc += value / (wa.powu(j1) * wb.powu(j2));
        }
    }
    acc * factorial(j1) * factorial(j2)
        / ((NODES * NODES) as f64 * RHO.powi((j1 + j2) as i32))
}

/// Euler-product evaluation of either variant at `j1 = j2 = 0`:
/// the product of [`cfunc_local`] at `s = z` over `p^r || n`.
pub fn cfunc_euler(variant: u8, n: u64, z: Complex64) -> Complex64 {
    validate_variant(variant);
    assert!(n >= 1, "cfunc_euler requires n >= 1");
    factorize(n)
        .factors
        .iter()
        .map(|&(p, r)| cfunc_local(variant, p, r, z, z))
        .product()
}

/// The `z`-grid a [`finalpiece_scan`] walks for each modulus `n`.
///
/// Real parts are the fixed list plus (optionally) `1/log n`; imaginary
/// parts come from `im`.  The default grid matches the reference runs:
/// `Re z` in `{0, 0.1, 1/log n}` and `Im z` in `{0, +-1, +-10}`.
#[derive(Clone, Debug)]
pub struct FinalPieceGrid {
    /// Fixed real parts, each required to be `>= 0`.
    pub fixed_re: Vec<f64>,
    /// Also include `Re z = 1/log n` (skipped at `n = 1` where it is moot).
    pub include_inv_log: bool,
    /// Imaginary parts.
    pub im: Vec<f64>,
}

impl Default for FinalPieceGrid {
    fn default() -> Self {
        FinalPieceGrid {
            fixed_re: vec![0.0, 0.1],
            include_inv_log: true,
            im: vec![0.0, 1.0, -1.0, 10.0, -10.0],
        }
    }
}

/// Scans both `C`-variants over `2 <= n <= n_max`, the grid's `z` values,
/// and all log powers `j1, j2 <= j_max`, checking the proposition's bound
/// `|C(n, z; j1, j2)| <= (log n)^(j1+j2)` (with `1e-9` slack for the
/// equality cases, e.g. variant 2 at `z = 0`, `n = 2`, `j2 = 1`).
pub fn finalpiece_scan(
    n_max: u64,
    grid: &FinalPieceGrid,
    j_max: u32,
) -> report_types::ScanReport {
    assert!(j_max <= CFUNC_MAX_LOG_POWER);
    let mut report = report_types::ScanReport::new(
        "finalpiece",
        format!(
            "n <= {n_max}, {} re x {} im grid points, log powers <= {j_max}, both variants",
            grid.fixed_re.len() + usize::from(grid.include_inv_log),
            grid.im.len()
        ),
    );

    let mut sup_ratio = 0.0f64;
    for n in 2..=n_max {
        let log_n = (n as f64).ln();
        let mut res = grid.fixed_re.clone();
        if grid.include_inv_log {
            res.push(1.0 / log_n);
        }
        for &re in &res {
            for &im in &grid.im {
                let z = Complex64::new(re, im);
                for variant in [1u8, 2u8] {
                    let table = cfunc_table(variant, n, z);
                    for j1 in 0..=j_max {
                        for j2 in 0..=j_max {
                            let value = table[j1 as usize][j2 as usize].norm();
                            let bound = log_n.powi((j1 + j2) as i32);
                            report.check_le(
                                format!(
                                    "variant {variant}, n={n}, z={re:.6}{im:+.1}i, j=({j1},{j2})"
                                ),
                                value,
                                bound + 1e-9,
                            );
                            if bound > 0.0 {
                                sup_ratio = sup_ratio.max(value / bound);
                            }
                        }
                    }
                }
            }
        }
    }
    report.add_stat("sup |C| / (log n)^(j1+j2)", sup_ratio);
    report.finalize();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn plain_variant_at_a_prime_telescopes_to_one() {
        for p in [2u64, 3, 5, 97] {
            for z in [c(0.0, 0.0), c(0.3, -2.0), c(1.0, 10.0)] {
                let value = cfunc(2, p, z, 0, 0);
                assert!((value - 1.0).norm() < 1e-14, "p={p}, got {value}");
            }
        }
    }

    #[test]
    fn plain_variant_telescopes_to_one_at_every_modulus() {
        // With equal variables on both layers the plain variant collapses
        // to 1 identically; this exercises the full double sum.
        for n in [4u64, 12, 30, 360, 1024, 9240] {
            let value = cfunc(2, n, c(0.27, -3.0), 0, 0);
            assert!((value - 1.0).norm() < 1e-12, "n={n}, got {value}");
        }
    }

    #[test]
    fn modulus_one_collapses_to_the_kronecker_case() {
        assert_eq!(cfunc(1, 1, c(0.5, 1.0), 0, 0), c(1.0, 0.0));
        assert_eq!(cfunc(2, 1, c(0.5, 1.0), 0, 0), c(1.0, 0.0));
        for (j1, j2) in [(1, 0), (0, 1), (2, 2)] {
            assert_eq!(cfunc(2, 1, c(0.5, 1.0), j1, j2).norm(), 0.0);
        }
    }

    #[test]
    fn single_inner_log_at_a_prime_matches_the_closed_form() {
        // Only g = p contributes a log: C2(p, z; 0, 1) = -(log p) p^{-z}.
        for p in [2u64, 7] {
            for z in [c(0.0, 0.0), c(0.4, 1.5)] {
                let expect = -(p as f64).ln() * (-z * (p as f64).ln()).exp();
                let got = cfunc(2, p, z, 0, 1);
                assert!((got - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn weighted_variant_matches_its_product_form_on_equal_variables() {
        // The local factor telescopes at s = z: C_p(z, z) = v(p)
        // + (1 - v(p)) p^{-z}, independent of the exponent of p, so
        // C1(n, z, z) = prod over p | n of ((1 - 1/p) + p^{-z}/p).
        for n in [2u64, 6, 8, 90, 4620] {
            for z in [c(0.0, 0.0), c(0.8, -4.0)] {
                let mut expect = c(1.0, 0.0);
                for &(p, _) in &factorize(n).factors {
                    let v = 1.0 - 1.0 / p as f64;
                    expect *= v + (1.0 - v) * (-z * (p as f64).ln()).exp();
                }
                let got = cfunc(1, n, z, 0, 0);
                assert!((got - expect).norm() < 1e-12, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn direct_sum_matches_the_euler_product() {
        for variant in [1u8, 2] {
            for n in [2u64, 36, 210, 1000, 5040] {
                for z in [c(0.0, 0.0), c(0.1, 1.0), c(1.0, -10.0)] {
                    let direct = cfunc(variant, n, z, 0, 0);
                    let product = cfunc_euler(variant, n, z);
                    assert!(
                        (direct - product).norm() < 1e-12,
                        "variant {variant}, n={n}, z={z}"
                    );
                }
            }
        }
    }

    #[test]
    fn local_factor_magnitude_stays_at_most_one_on_equal_variables() {
        for variant in [1u8, 2] {
            for p in [2u64, 3, 13] {
                for r in 1..=4 {
                    for re in [0.0, 0.05, 0.5, 2.0] {
                        for im in [0.0, 1.0, -7.0] {
                            let z = c(re, im);
                            let value = cfunc_local(variant, p, r, z, z).norm();
                            assert!(
                                value <= 1.0 + 1e-12,
                                "variant {variant}, p={p}, r={r}, z={z}: |C_p| = {value}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_closed_forms_match_finite_differences() {
        let points = [
            (1u8, 2u64, 1u32, c(0.0, 0.0)),
            (2, 2, 1, c(0.1, 1.0)),
            (1, 3, 2, c(0.5, -1.0)),
            (2, 5, 3, c(0.2, 0.0)),
            (2, 7, 4, c(0.0, 2.0)),
            (1, 7, 4, c(0.0, 0.0)),
        ];
        for &(variant, p, r, z) in &points {
            for j1 in 0..=2u32 {
                for j2 in 0..=2u32 {
                    // The (2, 2) stencil floors out near 3e-5; the contour
                    // oracle covers that pair at full accuracy instead.
                    let tol = if j1 + j2 == 4 { 1e-4 } else { 1e-6 };
                    let (closed, fd) = cfunc_derivative_crosscheck(variant, p, r, z, j1, j2);
                    assert!(
                        (closed - fd).norm() < tol,
                        "variant {variant}, p={p}, r={r}, z={z}, j=({j1},{j2}): \
                         closed {closed}, fd {fd}, gap {:.2e}",
                        (closed - fd).norm()
                    );
                }
            }
        }
    }

    #[test]
    fn contour_oracle_matches_the_closed_forms_at_every_order() {
        for variant in [1u8, 2] {
            for &(p, r) in &[(2u64, 1u32), (2, 4), (3, 2), (5, 3), (7, 4)] {
                for z in [c(0.0, 0.0), c(0.1, 1.0), c(0.5, -2.0)] {
                    for j1 in 0..=2 {
                        for j2 in 0..=2 {
                            let closed = cfunc_local_derivative(variant, p, r, z, z, j1, j2);
                            let contour =
                                cfunc_local_derivative_contour(variant, p, r, z, j1, j2);
                            assert!(
                                (closed - contour).norm() < 1e-9,
                                "variant {variant}, p={p}, r={r}, z={z}, j=({j1},{j2}): \
                                 closed {closed}, contour {contour}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mixed_derivative_vanishes_at_exponent_one() {
        // The t-sum is empty at r = 1, so the mixed derivative is zero.
        let value = cfunc_local_derivative(2, 5, 1, c(0.3, 1.0), c(0.3, 1.0), 1, 1);
        assert_eq!(value.norm(), 0.0);
    }

    #[test]
    fn reference_scan_passes_and_records_the_equality_case() {
        let report = finalpiece_scan(60, &FinalPieceGrid::default(), 2);
        assert!(report.passed(), "violations: {:?}", report.violations);
        // Variant 2 at n = 2, z = 0, j = (0, 1) hits |C| = log 2 exactly.
        let sup = report
            .stats
            .iter()
            .find(|s| s.name.starts_with("sup"))
            .expect("sup stat")
            .value;
        assert!(sup > 0.999_999, "sup ratio {sup}");
        assert!(sup <= 1.0 + 1e-9);
    }

    #[test]
    #[should_panic(expected = "variant")]
    fn unknown_variant_is_rejected() {
        cfunc(3, 10, c(0.0, 0.0), 0, 0);
    }
}
