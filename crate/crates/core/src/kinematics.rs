//! Background standing wave seen from a moving frame, and the de Broglie
//! quantities read off its modulation.

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Rest-frame wave numbers and boost.
///
/// The background signal is light-like, so `omega0 = c·k0`. `velocity_beta`
/// is v/c and `gamma` the matching Lorentz factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveKinematics {
    k0: f64,
    omega0: f64,
    velocity_beta: f64,
    gamma: f64,
}

impl WaveKinematics {
    pub fn new(k0: f64, velocity_beta: f64) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(Error::InvalidKinematics(format!("k0 must be positive, got {k0}")));
        }
        if !(velocity_beta.is_finite() && velocity_beta.abs() < 1.0) {
            return Err(Error::InvalidKinematics(format!(
                "velocity beta must lie in (-1, 1), got {velocity_beta}"
            )));
        }
        Ok(Self {
            k0,
            omega0: SPEED_OF_LIGHT * k0,
            velocity_beta,
            gamma: 1.0 / (1.0 - velocity_beta * velocity_beta).sqrt(),
        })
    }

    /// Uses the rest-energy balance `m₀c² = ħω₀` to fix `k0 = m₀c/ħ`.
    pub fn from_rest_mass(mass: f64, velocity_beta: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidKinematics(format!("mass must be positive, got {mass}")));
        }
        Self::new(mass * SPEED_OF_LIGHT / HBAR, velocity_beta)
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn velocity_beta(&self) -> f64 {
        self.velocity_beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Rest-frame standing wave `2 cos(k₀x) sin(ω₀t)`; antinode at the particle.
pub fn standing_wave(x: f64, t: f64, kin: &WaveKinematics) -> f64 {
    2.0 * (kin.k0 * x).cos() * (kin.omega0 * t).sin()
}

/// The two factors of [`modulated_wave`]: `cos(k₀γ(x - cβt))` and
/// `sin(ω₀γ(t - βx/c))`.
///
/// At fixed `t` the sine factor varies along x with angular frequency
/// `γβk₀`; its zeros are `π/(γβk₀)` apart.
pub fn modulated_wave_factors(x: f64, t: f64, kin: &WaveKinematics) -> (f64, f64) {
    let (k0, w0, g, b) = (kin.k0, kin.omega0, kin.gamma, kin.velocity_beta);
    let c = SPEED_OF_LIGHT;
    let space = (k0 * g * (x - c * b * t)).cos();
    let time = (w0 * g * (t - b * x / c)).sin();
    (space, time)
}

/// Standing wave Lorentz-transformed into a frame moving at `velocity_beta`.
pub fn modulated_wave(x: f64, t: f64, kin: &WaveKinematics) -> f64 {
    let (space, time) = modulated_wave_factors(x, t, kin);
    2.0 * space * time
}

/// De Broglie quantities of the modulation.
///
/// `wavelength` is `1/(γβk₀)`, with no factor of 2π, so that
/// `wavelength · wave_vector = 1`. Signs follow the direction of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeBroglie {
    pub momentum: f64,
    pub wavelength: f64,
    pub wave_vector: f64,
}

pub fn de_broglie(kin: &WaveKinematics) -> Result<DeBroglie> {
    if kin.velocity_beta == 0.0 {
        return Err(Error::DeBroglieAtRest);
    }
    let wave_vector = kin.gamma * kin.velocity_beta * kin.k0;
    Ok(DeBroglie {
        momentum: HBAR * wave_vector,
        wavelength: 1.0 / wave_vector,
        wave_vector,
    })
}
