//! Well-trapping law and the resulting occurrence probability.

use crate::error::{Error, Result};
use crate::thermo::BeamThermo;

/// Relative trapping weight of a well of depth `d`, given `beta_times_d = β·d`:
/// `(1/βE₀)(1 - e^(-β d))`.
///
/// This is the Boltzmann factor integrated over energies below the depth.
/// Positive infinity is accepted and gives the saturation value `1/βE₀`.
pub fn well_occupancy(beta_times_d: f64, thermo: &BeamThermo) -> Result<f64> {
    if beta_times_d.is_nan() || beta_times_d < 0.0 {
        return Err(Error::InvalidThermo(format!(
            "beta x depth must be >= 0, got {beta_times_d}"
        )));
    }
    let coupling = thermo.beta_e0();
    if coupling == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    Ok(-(-beta_times_d).exp_m1() / coupling)
}

/// Occurrence probability `1 - exp(-βE₀ · I)` for a peak-normalized
/// intensity `I`.
pub fn sed_probability(intensity: f64, thermo: &BeamThermo) -> Result<f64> {
    if !(0.0..=1.0).contains(&intensity) {
        return Err(Error::IntensityNotNormalized(intensity));
    }
    Ok(trapping_probability(thermo.beta_e0() * intensity))
}

/// `1 - e^(-x)` without cancellation for small `x`.
pub(crate) fn trapping_probability(exponent: f64) -> f64 {
    -(-exponent).exp_m1()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn thermo(b: f64) -> BeamThermo {
        BeamThermo::new(b).unwrap()
    }

    #[test]
    fn occupancy_examples() {
        assert_eq!(well_occupancy(0.0, &thermo(0.5)).unwrap(), 0.0);
        assert_eq!(well_occupancy(f64::INFINITY, &thermo(0.5)).unwrap(), 2.0);
        assert_relative_eq!(
            well_occupancy(1.0, &thermo(0.5)).unwrap(),
            2.0 * (1.0 - (-1.0f64).exp()),
            max_relative = 1e-15
        );
        assert_relative_eq!(well_occupancy(1.0, &thermo(0.5)).unwrap(), 1.264241, epsilon = 1e-6);
    }

    #[test]
    fn occupancy_needs_coupling() {
        assert_eq!(well_occupancy(1.0, &thermo(0.0)), Err(Error::DegenerateCoupling));
        assert!(well_occupancy(-1.0, &thermo(0.5)).is_err());
    }

    #[test]
    fn probability_examples() {
        assert_eq!(sed_probability(0.0, &thermo(0.5)).unwrap(), 0.0);
        assert_relative_eq!(
            sed_probability(1.0, &thermo(0.5)).unwrap(),
            1.0 - (-0.5f64).exp(),
            max_relative = 1e-15
        );
        assert_relative_eq!(sed_probability(1.0, &thermo(0.5)).unwrap(), 0.393469, epsilon = 1e-6);
        let p = sed_probability(0.5, &thermo(0.01)).unwrap();
        assert_relative_eq!(p, 0.0049875, max_relative = 1e-4);
        assert!((p - 0.005).abs() / 0.005 < 3e-3);
    }

    #[test]
    fn probability_rejects_unnormalized() {
        let e = sed_probability(1.5, &thermo(0.5)).unwrap_err();
        assert!(e.to_string().contains("intensity must be peak-normalized"));
        assert!(sed_probability(-0.1, &thermo(0.5)).is_err());
        assert!(sed_probability(f64::NAN, &thermo(0.5)).is_err());
    }
}
