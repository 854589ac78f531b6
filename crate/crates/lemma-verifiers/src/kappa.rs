//! The symmetrizing operator 𝒦g = i^{−k} g + i^k ḡ.
//!
//! With exact quarter powers of i the two terms are complex conjugates
//! of each other, so 𝒦g is real — exactly real in floating point, since
//! multiplying by {±1, ±i} only permutes and negates components. The
//! identity checks rely on that realness when they accumulate 𝒦-terms.

use num_complex::Complex64;

/// i^k from k mod 4, exact.
fn i_power(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// 𝒦g = i^{−k} g + i^k ḡ. The imaginary part cancels exactly.
pub fn kappa_apply(g: Complex64, k: u32) -> Complex64 {
    let ik = i_power(k);
    ik.conj() * g + ik * g.conj()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(theta: f64) -> Complex64 {
        Complex64::new(0.0, 2.0 * core::f64::consts::PI * theta).exp()
    }

    #[test]
    fn unit_input_at_odd_weight_cancels() {
        let v = kappa_apply(Complex64::new(1.0, 0.0), 3);
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn imaginary_input_at_weight_three() {
        let v = kappa_apply(Complex64::new(0.0, 1.0), 3);
        assert_eq!(v, Complex64::new(-2.0, 0.0));
    }

    #[test]
    fn eighth_root_at_weight_four_gives_sqrt_two() {
        let v = kappa_apply(e(1.0 / 8.0), 4);
        assert!((v.re - 2.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn result_is_exactly_real() {
        for k in 0..8 {
            for (re, im) in [(0.3, -1.7), (2.0, 0.25), (-0.9, -0.4)] {
                let v = kappa_apply(Complex64::new(re, im), k);
                assert_eq!(v.im, 0.0, "k={k} re={re} im={im}");
            }
        }
    }

    #[test]
    fn additive_over_inputs_exactly() {
        let g1 = Complex64::new(0.125, -0.75);
        let g2 = Complex64::new(-2.5, 0.0625);
        for k in 0..4 {
            let joint = kappa_apply(g1 + g2, k);
            let split = kappa_apply(g1, k) + kappa_apply(g2, k);
            // Multiplication by exact quarter powers distributes exactly.
            assert_eq!(joint, split, "k={k}");
        }
    }

    #[test]
    fn period_four_in_the_weight() {
        let g = Complex64::new(0.6, 1.1);
        for k in 0..4 {
            assert_eq!(kappa_apply(g, k), kappa_apply(g, k + 4));
        }
    }
}
