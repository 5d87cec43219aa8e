//! Thermodynamic coupling between the beam and the background field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equilibrium bound on the trapping exponent from the harmonic-well
/// equipartition argument. Exceeding it is reported, not rejected.
pub const EQUILIBRIUM_BOUND: f64 = 0.5;

/// Values above this are rejected outright.
pub const HARD_LIMIT: f64 = 1.0;

const CONSISTENCY_TOLERANCE: f64 = 1e-12;

/// Inverse temperature times intensity scale, plus the optional dimensional
/// factors it came from.
///
/// `beta_e0` is the coefficient of the exponent in the trapping probability
/// `1 - exp(-beta_e0 · I)`. The thermodynamic β here is unrelated to the
/// velocity β in [`crate::WaveKinematics`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamThermo {
    beta_e0: f64,
    e0: Option<f64>,
    beta_thermo: Option<f64>,
}

impl BeamThermo {
    pub fn new(beta_e0: f64) -> Result<Self> {
        check_coupling(beta_e0)?;
        Ok(Self { beta_e0, e0: None, beta_thermo: None })
    }

    /// Builds the coupling from an inverse temperature (1/J) and an energy
    /// scale (J).
    pub fn from_scales(beta_thermo: f64, e0: f64) -> Result<Self> {
        if !(e0.is_finite() && e0 > 0.0) {
            return Err(Error::InvalidThermo(format!("E0 must be a positive energy, got {e0}")));
        }
        if !(beta_thermo.is_finite() && beta_thermo >= 0.0) {
            return Err(Error::InvalidThermo(format!(
                "inverse temperature must be >= 0, got {beta_thermo}"
            )));
        }
        let beta_e0 = beta_thermo * e0;
        check_coupling(beta_e0)?;
        Ok(Self { beta_e0, e0: Some(e0), beta_thermo: Some(beta_thermo) })
    }

    /// Like [`BeamThermo::from_scales`] but also checks a stated product.
    pub fn with_scales(beta_e0: f64, beta_thermo: f64, e0: f64) -> Result<Self> {
        let t = Self::from_scales(beta_thermo, e0)?;
        let scale = beta_e0.abs().max(t.beta_e0.abs()).max(f64::MIN_POSITIVE);
        if (t.beta_e0 - beta_e0).abs() > CONSISTENCY_TOLERANCE * scale {
            return Err(Error::InvalidThermo(format!(
                "beta_thermo x E0 = {} does not match beta_E0 = {beta_e0}",
                t.beta_e0
            )));
        }
        check_coupling(beta_e0)?;
        Ok(Self { beta_e0, ..t })
    }

    pub fn beta_e0(&self) -> f64 {
        self.beta_e0
    }

    pub fn e0(&self) -> Option<f64> {
        self.e0
    }

    pub fn beta_thermo(&self) -> Option<f64> {
        self.beta_thermo
    }

    /// True when the coupling is above the 1/2 equilibrium bound.
    pub fn exceeds_equilibrium_bound(&self) -> bool {
        self.beta_e0 > EQUILIBRIUM_BOUND
    }

    pub fn warning(&self) -> Option<String> {
        self.exceeds_equilibrium_bound().then(|| {
            format!(
                "beta_E0 = {} exceeds the equilibrium bound {EQUILIBRIUM_BOUND}; proceeding",
                self.beta_e0
            )
        })
    }
}

fn check_coupling(beta_e0: f64) -> Result<()> {
    if !beta_e0.is_finite() || beta_e0 < 0.0 {
        return Err(Error::InvalidThermo(format!("beta_E0 must be finite and >= 0, got {beta_e0}")));
    }
    if beta_e0 > HARD_LIMIT {
        return Err(Error::InvalidThermo(format!(
            "beta_E0 = {beta_e0} is above the hard limit {HARD_LIMIT}"
        )));
    }
    Ok(())
}
