//! Physical constants (SI, CODATA 2018 exact or recommended values).

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Electron rest mass, kg.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;

/// Neutron rest mass, kg.
pub const NEUTRON_MASS: f64 = 1.674_927_498_04e-27;

/// One light year in meters, rounded as used for order-of-magnitude work.
pub const LIGHT_YEAR: f64 = 9.461e15;
