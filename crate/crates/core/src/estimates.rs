//! Order-of-magnitude coherence and population estimates.

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};

/// Inputs for the coherence estimates. SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceInputs {
    pub bandwidth_hz: f64,
    pub source_distance_m: f64,
    pub wavelength_m: f64,
    pub source_area_m2: f64,
    pub speed_of_light_m_per_s: f64,
}

impl CoherenceInputs {
    pub fn new(
        bandwidth_hz: f64,
        source_distance_m: f64,
        wavelength_m: f64,
        source_area_m2: f64,
    ) -> Result<Self> {
        let inputs = Self {
            bandwidth_hz,
            source_distance_m,
            wavelength_m,
            source_area_m2,
            speed_of_light_m_per_s: SPEED_OF_LIGHT,
        };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("bandwidth", self.bandwidth_hz),
            ("source distance", self.source_distance_m),
            ("wavelength", self.wavelength_m),
            ("source area", self.source_area_m2),
            ("speed of light", self.speed_of_light_m_per_s),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidEstimate(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Longitudinal coherence length `c/Δν`, meters.
pub fn coherence_length(inputs: &CoherenceInputs) -> Result<f64> {
    inputs.validate()?;
    Ok(inputs.speed_of_light_m_per_s / inputs.bandwidth_hz)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceWidth {
    pub coherence_area_m2: f64,
    pub coherence_width_m: f64,
}

/// Lateral coherence area `R²λ²/S` and its square root.
pub fn coherence_width(inputs: &CoherenceInputs) -> Result<CoherenceWidth> {
    inputs.validate()?;
    let rl = inputs.source_distance_m * inputs.wavelength_m;
    let area = rl * rl / inputs.source_area_m2;
    Ok(CoherenceWidth { coherence_area_m2: area, coherence_width_m: area.sqrt() })
}

/// Boltzmann ratio of aligned to antialigned populations, `e^(-β·ΔE)`.
///
/// `beta_thermo` is an inverse energy (1/J); the dipole interaction energy
/// enters only through the caller's `delta_e`.
pub fn spin_population_ratio(delta_e: f64, beta_thermo: f64) -> Result<f64> {
    if !(delta_e.is_finite() && delta_e >= 0.0) {
        return Err(Error::InvalidEstimate(format!("energy gap must be >= 0, got {delta_e}")));
    }
    if !(beta_thermo.is_finite() && beta_thermo >= 0.0) {
        return Err(Error::InvalidEstimate(format!(
            "inverse temperature must be >= 0, got {beta_thermo}"
        )));
    }
    Ok((-beta_thermo * delta_e).exp())
}
