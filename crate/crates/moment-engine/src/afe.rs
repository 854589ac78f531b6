//! The Mellin cutoff weight `U(y)` of the approximate functional equation.
//!
//! `U(y) = (1/2πi) ∫ y^{−s} γ(s)³ e^{3s²} ds/s` over a vertical line,
//! where `γ(s) = (2π)^{−s} Γ(k/2+s)/Γ(k/2)`.  The `e^{3s²}` factor decays
//! like `e^{−3t²}` along any vertical line, so a plain trapezoid rule is
//! spectrally accurate and a height of 40 truncates far below 1e−12.
//!
//! Line placement is the one numerically delicate point.  On `Re s = 2`
//! the factor `y^{−2}` multiplies the absolute quadrature noise, which
//! for `y = 1e−8` means an amplification of 1e16 — six orders past what
//! double precision can cancel, however the nodes are summed.  So the
//! line sits at `Re s = 2` only for `y ≥ 1`; for `y < 1` it is moved to
//! `Re s = −1`, crossing the single pole at `s = 0` whose residue is
//! `γ(0)³ = 1` exactly, after which the remaining integral carries a
//! harmless factor `y^{+1}`.  Both branches are the same function: they
//! agree to ~1e−12 on `0.5 ≤ y ≤ 2` where either is well conditioned,
//! and [`u_weight_on_line`] exposes the line choice so that the
//! agreement is testable from outside.
//!
//! [`u_weight`] is the checked single-shot evaluator: it doubles the
//! node count, verifies the imaginary part of the unfolded two-sided
//! sum, and refuses rather than returns a doubtful value.  [`UKernel`]
//! is the bulk path for the diagonal and off-diagonal sums: node data
//! is precomputed once and each evaluation is a short real dot product
//! driven by a rotation recurrence.

use crate::{MomentConfig, MomentError};
use num_complex::Complex64;
use special_fn::gamma_factor;

/// Integrand numerator `γ(s)³ e^{3s²} / s` at `s = σ + it`.
fn line_kernel(sigma: f64, t: f64, k: u32) -> Result<Complex64, MomentError> {
    let s = Complex64::new(sigma, t);
    let gamma = gamma_factor(s, k).map_err(|e| {
        MomentError::Quadrature(format!("gamma factor failed at s = {sigma} + {t}i: {e}"))
    })?;
    let growth = (3.0 * s * s).exp();
    Ok(gamma * gamma * gamma * growth / s)
}

/// Validates a line placement for weight `k`: the only pole the contour
/// may cross is the one at `s = 0`, so `σ` must stay right of the first
/// gamma pole at `−k/2` and off zero itself.
fn check_sigma(sigma: f64, k: u32) -> Result<(), MomentError> {
    if sigma == 0.0 || sigma <= -(k as f64) / 2.0 {
        return Err(MomentError::InvalidConfig(format!(
            "line Re s = {sigma} is not between the pole at 0 and the gamma poles for k = {k}"
        )));
    }
    Ok(())
}

/// Evaluates `U(y)` by the trapezoid rule on the line `Re s = sigma`,
/// adding the residue 1 of the pole at `s = 0` when the line sits left
/// of it.  Returns `(value, imaginary_part)` of the full two-sided sum;
/// the imaginary part is a pure numerical defect and its size is a
/// useful health signal, so it is reported rather than discarded.
///
/// The caller owns the conditioning question: for `y ≪ 1` a positive
/// line multiplies roundoff by `y^{−σ}`, for `y ≫ 1` a negative line
/// does the same with `y^{|σ|}`.  [`u_weight`] picks the safe side.
pub fn u_weight_on_line(
    y: f64,
    k: u32,
    sigma: f64,
    height: f64,
    nodes: usize,
) -> Result<(f64, f64), MomentError> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(MomentError::InvalidConfig(format!(
            "cutoff weight argument must be positive and finite, got {y}"
        )));
    }
    check_sigma(sigma, k)?;
    if nodes < 16 || !(height > 0.0) {
        return Err(MomentError::InvalidConfig(
            "line quadrature needs positive height and at least 16 nodes".into(),
        ));
    }
    let step = height / nodes as f64;
    let log_y = y.ln();
    // Two-sided trapezoid of y^{−s}·kernel/(2π), summed with Neumaier
    // compensation: at y near 1e−8 the answer is recovered from ~16
    // digits of cancellation, so the summation itself must not add to
    // the per-node evaluation noise.
    let mut sum_re = 0.0f64;
    let mut comp_re = 0.0f64;
    let mut sum_im = 0.0f64;
    let mut comp_im = 0.0f64;
    let absorb = |sum: &mut f64, comp: &mut f64, term: f64| {
        let t = *sum + term;
        if sum.abs() >= term.abs() {
            *comp += (*sum - t) + term;
        } else {
            *comp += (term - t) + *sum;
        }
        *sum = t;
    };
    for j in -(nodes as i64)..=(nodes as i64) {
        let t = j as f64 * step;
        let kernel = line_kernel(sigma, t, k)?;
        if kernel == Complex64::new(0.0, 0.0) {
            continue;
        }
        // y^{−s} = y^{−σ}·e^{−it·ln y}; the weight on the endpoints is
        // halved, although the integrand is already zero there.
        let phase = Complex64::from_polar(1.0, -t * log_y);
        let w = if j.unsigned_abs() as usize == nodes {
            0.5
        } else {
            1.0
        };
        let term = kernel * phase * w;
        absorb(&mut sum_re, &mut comp_re, term.re);
        absorb(&mut sum_im, &mut comp_im, term.im);
    }
    let scale = y.powf(-sigma) * step / (2.0 * std::f64::consts::PI);
    let residue = if sigma < 0.0 { 1.0 } else { 0.0 };
    let value = residue + (sum_re + comp_re) * scale;
    let im = (sum_im + comp_im) * scale;
    Ok((value, im))
}

/// Core of the checked evaluator: line picked by conditioning, node
/// count doubled as a convergence check, imaginary part verified.
fn u_weight_with(
    y: f64,
    k: u32,
    height: f64,
    nodes: usize,
    im_tolerance: f64,
) -> Result<f64, MomentError> {
    let sigma = if y < 1.0 { -1.0 } else { 2.0 };
    let (coarse, _) = u_weight_on_line(y, k, sigma, height, nodes)?;
    let (fine, im) = u_weight_on_line(y, k, sigma, height, 2 * nodes)?;
    if im.abs() > im_tolerance {
        return Err(MomentError::Quadrature(format!(
            "imaginary part {im:.3e} of U({y}) exceeds tolerance {im_tolerance:.3e}"
        )));
    }
    if (fine - coarse).abs() > 1e-8 {
        return Err(MomentError::Quadrature(format!(
            "node doubling moved U({y}) by {:.3e}",
            (fine - coarse).abs()
        )));
    }
    Ok(fine)
}

/// The cutoff weight `U(y)` under the quadrature settings of `config`.
pub fn u_weight_checked(y: f64, k: u32, config: &MomentConfig) -> Result<f64, MomentError> {
    u_weight_with(y, k, config.mellin_height, config.mellin_nodes, config.im_tolerance)
}

/// The cutoff weight `U(y)` for weight `k` at default quadrature settings.
pub fn u_weight(y: f64, k: u32) -> Result<f64, MomentError> {
    u_weight_with(y, k, 40.0, 2000, 1e-10)
}

/// Precomputed evaluator of `U` on one line, for bulk summation.
///
/// The two-sided integral folds onto the half line `t ≥ 0` because the
/// kernel obeys `K(−t) = conj K(t)`, leaving the explicitly real form
/// `U(y) = residue + y^{−σ} Σ_j (a_j cos(t_j L) + b_j sin(t_j L))` with
/// `L = ln y`.  Nodes whose coefficients fall below 1e−22 of the largest
/// are dropped: they sit under the resolution of the final double sum
/// no matter how many there are.
pub struct UKernel {
    sigma: f64,
    residue: f64,
    step: f64,
    coeff: Vec<(f64, f64)>,
}

impl UKernel {
    /// Builds the kernel for weight `k` on the line `Re s = sigma`.
    pub fn new(k: u32, sigma: f64, height: f64, nodes: usize) -> Result<Self, MomentError> {
        check_sigma(sigma, k)?;
        if nodes < 16 || !(height > 0.0) {
            return Err(MomentError::InvalidConfig(
                "kernel needs positive height and at least 16 nodes".into(),
            ));
        }
        let step = height / nodes as f64;
        let base = step / std::f64::consts::PI;
        let mut coeff = Vec::with_capacity(nodes + 1);
        let mut peak = 0.0f64;
        for j in 0..=nodes {
            let kernel = line_kernel(sigma, j as f64 * step, k)?;
            // The j = 0 node is shared by both half lines, so it enters
            // with half the folded weight; the endpoint halving of the
            // trapezoid rule is immaterial because the integrand has
            // underflowed to zero long before the last node.
            let w = if j == 0 { base / 2.0 } else { base };
            let a = w * kernel.re;
            let b = w * kernel.im;
            peak = peak.max(a.abs().max(b.abs()));
            coeff.push((a, b));
        }
        let floor = peak * 1e-22;
        while coeff.len() > 16 {
            let (a, b) = coeff[coeff.len() - 1];
            if a.abs() > floor || b.abs() > floor {
                break;
            }
            coeff.pop();
        }
        let residue = if sigma < 0.0 { 1.0 } else { 0.0 };
        Ok(UKernel {
            sigma,
            residue,
            step,
            coeff,
        })
    }

    /// Kernel pair covering both sides of `y = 1`: the first entry is
    /// the `Re s = −1` kernel for `y < 1`, the second the `Re s = 2`
    /// kernel for `y ≥ 1`.
    pub fn pair(config: &MomentConfig) -> Result<(UKernel, UKernel), MomentError> {
        let low = UKernel::new(config.k, -1.0, config.mellin_height, config.mellin_nodes)?;
        let high = UKernel::new(config.k, 2.0, config.mellin_height, config.mellin_nodes)?;
        Ok((low, high))
    }

    /// Evaluates `U(y)` on this kernel's line.
    pub fn eval(&self, y: f64) -> f64 {
        debug_assert!(y > 0.0);
        let angle = self.step * y.ln();
        let (sin_step, cos_step) = angle.sin_cos();
        // cos/sin(j·angle) by rotation; the recurrence drifts by at most
        // a few ulps per step, far below the coefficient floor over the
        // few hundred surviving nodes.
        let mut cos_t = 1.0f64;
        let mut sin_t = 0.0f64;
        let mut acc = 0.0f64;
        for &(a, b) in &self.coeff {
            // The fold uses y^{−s} = y^{−σ}(cos(tL) − i sin(tL)):
            // Re(K·e^{−itL}) = K.re·cos(tL) + K.im·sin(tL).
            acc += a * cos_t + b * sin_t;
            let next_cos = cos_t * cos_step - sin_t * sin_step;
            sin_t = sin_t * cos_step + cos_t * sin_step;
            cos_t = next_cos;
        }
        self.residue + y.powf(-self.sigma) * acc
    }

    /// Number of nodes that survived the coefficient floor.
    pub fn active_nodes(&self) -> usize {
        self.coeff.len()
    }
}

/// Evaluator dispatching between the two lines at `y = 1`, with a value
/// cache indexed by integer numerators: the bulk sums only ever need
/// `U(v / scale)` for integers `v`, and the same `v` recurs across
/// blocks, so a flat slot table trades memory for the repeated work.
pub struct CachedWeight {
    low: UKernel,
    high: UKernel,
    scale: f64,
    slots: Vec<f64>,
}

impl CachedWeight {
    /// Builds the pair of kernels and a cache for numerators up to `max_v`.
    pub fn new(config: &MomentConfig, scale: f64, max_v: u64) -> Result<Self, MomentError> {
        let (low, high) = UKernel::pair(config)?;
        Ok(CachedWeight {
            low,
            high,
            scale,
            slots: vec![f64::NAN; (max_v + 1) as usize],
        })
    }

    /// `U(v / scale)`, memoized.
    pub fn at(&mut self, v: u64) -> f64 {
        let slot = &mut self.slots[v as usize];
        if slot.is_nan() {
            let y = v as f64 / self.scale;
            *slot = if y < 1.0 {
                self.low.eval(y)
            } else {
                self.high.eval(y)
            };
        }
        *slot
    }

    /// Read-only lookup for slots already filled by [`Self::prefill`];
    /// usable from parallel workers because it never writes.
    pub fn get(&self, v: u64) -> f64 {
        let value = self.slots[v as usize];
        debug_assert!(!value.is_nan(), "slot {v} read before prefill");
        value
    }

    /// Fills every slot in `1..=max_v` in parallel, leaving later reads
    /// contention-free.  The result is identical to lazy filling because
    /// each slot is a pure function of its index.
    pub fn prefill(&mut self, max_v: u64) {
        use rayon::prelude::*;
        let scale = self.scale;
        let low = &self.low;
        let high = &self.high;
        self.slots[1..=(max_v as usize)]
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, slot)| {
                let y = (i + 1) as f64 / scale;
                *slot = if y < 1.0 { low.eval(y) } else { high.eval(y) };
            });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_arguments_give_one_within_a_tenth_of_a_permille() {
        let u = u_weight(1e-8, 3).unwrap();
        assert!((u - 1.0).abs() < 1e-4, "U(1e-8) = {u}");
    }

    #[test]
    fn large_arguments_are_crushed() {
        // The e^{3s²} factor caps how far right the contour can profitably
        // shift, so the decay in y is fast but not arbitrarily fast: the
        // true values (cross-checked on Re s ∈ {1,2,3}, line-independent
        // to twelve digits) are ≈ 2.26e−4 at y = 100 and ≈ 6.9e−6 at
        // y = 1000.
        let u100 = u_weight(100.0, 3).unwrap();
        assert!((u100 - 2.257294968576e-4).abs() < 1e-12, "U(100) = {u100}");
        let u300 = u_weight(300.0, 3).unwrap();
        let u1000 = u_weight(1000.0, 3).unwrap();
        assert!(u1000 < u300 && u300 < u100, "decay broke: {u100} {u300} {u1000}");
        assert!(u1000 < 1e-5, "U(1000) = {u1000}");
    }

    #[test]
    fn imaginary_part_stays_under_tolerance_across_the_transition() {
        for &y in &[0.1, 1.0, 10.0] {
            let sigma = if y < 1.0 { -1.0 } else { 2.0 };
            let (_, im) = u_weight_on_line(y, 3, sigma, 40.0, 2000).unwrap();
            assert!(im.abs() < 1e-10, "Im U({y}) = {im}");
        }
    }

    #[test]
    fn both_lines_agree_where_both_are_well_conditioned() {
        for &y in &[0.5, 0.8, 1.0, 1.5, 2.0] {
            let (left, _) = u_weight_on_line(y, 3, -1.0, 40.0, 2000).unwrap();
            let (right, _) = u_weight_on_line(y, 3, 2.0, 40.0, 2000).unwrap();
            assert!(
                (left - right).abs() < 1e-9,
                "line disagreement at y = {y}: {left} vs {right}"
            );
        }
    }

    #[test]
    fn values_stay_in_the_unit_band_and_decay_monotonically() {
        let mut y = 1e-8;
        let mut previous_on_tail = f64::INFINITY;
        while y <= 1e3 {
            let u = u_weight(y, 3).unwrap();
            assert!(u >= -1e-6 && u <= 1.0 + 1e-3, "U({y}) = {u} out of band");
            if y >= 1.0 {
                assert!(
                    u <= previous_on_tail + 1e-9,
                    "U not decreasing at y = {y}: {u} after {previous_on_tail}"
                );
                previous_on_tail = u;
            }
            y *= 1.9;
        }
    }

    #[test]
    fn kernel_matches_the_checked_evaluator_on_both_branches() {
        let config = MomentConfig::new(11, 3).unwrap();
        let (low, high) = UKernel::pair(&config).unwrap();
        for &y in &[1e-6, 0.03, 0.4, 0.97] {
            let direct = u_weight_checked(y, 3, &config).unwrap();
            assert!(
                (low.eval(y) - direct).abs() < 1e-9,
                "low kernel off at y = {y}"
            );
        }
        for &y in &[1.0, 2.5, 7.0, 40.0] {
            let direct = u_weight_checked(y, 3, &config).unwrap();
            assert!(
                (high.eval(y) - direct).abs() < 1e-9,
                "high kernel off at y = {y}"
            );
        }
    }

    #[test]
    fn kernel_trims_dead_nodes() {
        let kernel = UKernel::new(3, 2.0, 40.0, 2000).unwrap();
        assert!(kernel.active_nodes() < 500, "{}", kernel.active_nodes());
        assert!(kernel.active_nodes() > 100, "{}", kernel.active_nodes());
    }

    #[test]
    fn cache_reproduces_direct_evaluation() {
        let config = MomentConfig::new(11, 3).unwrap();
        let scale = 11f64.powf(1.5);
        let mut cache = CachedWeight::new(&config, scale, 64).unwrap();
        cache.prefill(64);
        for v in [1u64, 7, 36, 37, 64] {
            let direct = u_weight_checked(v as f64 / scale, 3, &config).unwrap();
            assert!(
                (cache.at(v) - direct).abs() < 1e-9,
                "cache slot {v} disagrees"
            );
        }
    }

    #[test]
    fn zero_line_and_gamma_pole_lines_are_rejected() {
        assert!(u_weight_on_line(0.5, 3, 0.0, 40.0, 2000).is_err());
        assert!(u_weight_on_line(0.5, 3, -1.5, 40.0, 2000).is_err());
        assert!(u_weight_on_line(-1.0, 3, 2.0, 40.0, 2000).is_err());
    }

    #[test]
    fn higher_weights_keep_the_normalization() {
        // Larger k pushes the decay scale out (the Γ(k/2+s) ratio grows),
        // so the far tail is small but k-dependent: measured U(300) is
        // ≈ 3.6e−4, 1.3e−3, 3.2e−3 for k = 5, 7, 9.
        for &k in &[5u32, 7, 9] {
            let u = u_weight(1e-8, k).unwrap();
            assert!((u - 1.0).abs() < 1e-4, "U(1e-8) = {u} at k = {k}");
            let mid = u_weight(30.0, k).unwrap();
            let far = u_weight(300.0, k).unwrap();
            assert!(far < mid, "no decay at k = {k}: {mid} vs {far}");
            assert!(far.abs() < 5e-3, "U(300) = {far} at k = {k}");
        }
    }
}
