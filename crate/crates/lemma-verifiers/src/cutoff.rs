//! The canonical smooth cutoff w used by the smoothed identities.
//!
//! w is the C^∞ smoothstep that is ≡ 1 on [0, 1], ≡ 0 on [2, ∞), and on
//! (1, 2) descends as the normalized integral of the standard bump kernel
//! K(τ) = exp(−1/(1−τ²)):
//!
//!   w(x) = ∫_t^1 K(τ) dτ / ∫_{−1}^1 K(τ) dτ,   t = 2x − 3,
//!
//! so that t runs −1 → 1 as x runs 1 → 2. All derivatives of K vanish at
//! τ = ±1, which makes w infinitely smooth at the junctions x = 1 and
//! x = 2 and monotone nonincreasing in between — exactly the properties
//! the identity proofs need (rapid Mellin decay of the cutoff).
//!
//! The cumulative integral of K is tabulated once at panel boundaries
//! (4096 panels × 8-point Gauss–Legendre) and finished with a partial
//! panel at evaluation time; at that panel width the quadrature error is
//! far below 1e−15.

use once_cell::sync::Lazy;
use special_fn::quad::gauss_legendre;

const PANELS: usize = 4096;

/// Bump kernel K(τ) = exp(−1/(1−τ²)) on (−1, 1), zero outside.
fn kernel(tau: f64) -> f64 {
    let w = 1.0 - tau * tau;
    if w <= 0.0 {
        0.0
    } else {
        (-1.0 / w).exp()
    }
}

struct KernelTable {
    /// prefix[i] = ∫_{−1}^{−1+2i/PANELS} K, so prefix[PANELS] is the mass.
    prefix: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

static TABLE: Lazy<KernelTable> = Lazy::new(|| {
    let (nodes, weights) = gauss_legendre(8);
    let h = 2.0 / PANELS as f64;
    let mut prefix = Vec::with_capacity(PANELS + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for i in 0..PANELS {
        let a = -1.0 + h * i as f64;
        let mid = a + 0.5 * h;
        let mut panel = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            panel += w * kernel(mid + 0.5 * h * x);
        }
        acc += panel * 0.5 * h;
        prefix.push(acc);
    }
    KernelTable {
        prefix,
        nodes,
        weights,
    }
});

/// ∫_{−1}^t K(τ) dτ via the table plus a partial panel.
fn kernel_cumulative(t: f64) -> f64 {
    let table = &*TABLE;
    if t <= -1.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return table.prefix[PANELS];
    }
    let h = 2.0 / PANELS as f64;
    let idx = (((t + 1.0) / h) as usize).min(PANELS - 1);
    let a = -1.0 + h * idx as f64;
    let mid = 0.5 * (a + t);
    let half = 0.5 * (t - a);
    let mut partial = 0.0;
    for (x, w) in table.nodes.iter().zip(&table.weights) {
        partial += w * kernel(mid + half * x);
    }
    table.prefix[idx] + partial * half
}

/// The smooth cutoff w(ℓ/L): a fixed C^∞ shape with a length scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothCutoff {
    /// The length scale L in w(ℓ/L).
    pub scale: f64,
}

impl SmoothCutoff {
    pub fn new(scale: f64) -> Self {
        assert!(scale > 0.0, "cutoff scale must be positive");
        SmoothCutoff { scale }
    }

    /// The dimensionless shape: 1 on [0, 1], 0 on [2, ∞), normalized
    /// bump-integral descent in between.
    pub fn shape(x: f64) -> f64 {
        if x <= 1.0 {
            1.0
        } else if x >= 2.0 {
            0.0
        } else {
            let t = 2.0 * x - 3.0;
            1.0 - kernel_cumulative(t) / TABLE.prefix[PANELS]
        }
    }

    /// w(ℓ/L) for this instance's scale.
    pub fn value(&self, ell: f64) -> f64 {
        Self::shape(ell / self.scale)
    }
}

/// Alternative C¹ ramp (1+cos π(x−1))/2 on (1, 2), used to spot-check
/// that the smoothed identities do not depend on the cutoff shape.
pub fn cosine_ramp_shape(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else if x >= 2.0 {
        0.0
    } else {
        0.5 * (1.0 + (core::f64::consts::PI * (x - 1.0)).cos())
    }
}
