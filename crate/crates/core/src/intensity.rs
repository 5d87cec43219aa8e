//! Far-field slit intensities, normalized to a unit principal maximum.

use std::f64::consts::PI;

/// Below this magnitude the removable singularity is replaced by its limit.
const SINGULAR_CUTOFF: f64 = 1e-8;

/// `sin²θ / θ²`, equal to 1 at θ = 0.
pub fn single_slit_intensity(theta: f64) -> f64 {
    if theta.abs() < SINGULAR_CUTOFF {
        return 1.0;
    }
    let s = theta.sin() / theta;
    s * s
}

/// Grating factor `sin²(nφ) / (n² sin²φ)`, equal to 1 at every φ = mπ.
pub fn interference_factor(phi: f64, n_slits: u32) -> f64 {
    assert!(n_slits >= 1, "n_slits must be >= 1");
    if n_slits == 1 {
        return 1.0;
    }
    // Reduce to the nearest principal maximum: sin²(n(mπ + δ)) = sin²(nδ).
    let delta = phi - PI * (phi / PI).round();
    if delta.abs() < SINGULAR_CUTOFF {
        return 1.0;
    }
    let n = f64::from(n_slits);
    let r = (n * delta).sin() / (n * delta.sin());
    r * r
}

/// N-slit intensity: single-slit envelope times the grating factor.
pub fn multi_slit_intensity(theta: f64, phi: f64, n_slits: u32) -> f64 {
    single_slit_intensity(theta) * interference_factor(phi, n_slits)
}
