//! Sampled diffraction curves and the paired radiation/particle patterns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{phase_of_y, theta_of_y, ExperimentGeometry, GridSpec};
use crate::intensity::multi_slit_intensity;
use crate::sed::trapping_probability;
use crate::thermo::BeamThermo;

const PEAK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    Raw,
    PeakUnity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    RadiationIntensity,
    SedProbability,
}

/// Non-negative samples on a strictly increasing position grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternCurve {
    positions_y: Vec<f64>,
    thetas: Vec<f64>,
    values: Vec<f64>,
    normalization: Normalization,
    kind: CurveKind,
}

impl PatternCurve {
    pub fn new(
        positions_y: Vec<f64>,
        thetas: Vec<f64>,
        values: Vec<f64>,
        normalization: Normalization,
        kind: CurveKind,
    ) -> Result<Self> {
        let curve = Self { positions_y, thetas, values, normalization, kind };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<()> {
        let n = self.positions_y.len();
        if n == 0 {
            return Err(Error::InvalidCurve("curve has no samples".into()));
        }
        if self.thetas.len() != n || self.values.len() != n {
            return Err(Error::InvalidCurve(format!(
                "length mismatch: {} positions, {} thetas, {} values",
                n,
                self.thetas.len(),
                self.values.len()
            )));
        }
        if self.positions_y.iter().any(|y| !y.is_finite())
            || self.positions_y.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidCurve("positions must be finite and strictly increasing".into()));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidCurve(format!("values must be finite and >= 0, got {v}")));
        }
        if self.normalization == Normalization::PeakUnity {
            let peak = self.peak();
            if (peak - 1.0).abs() > PEAK_TOLERANCE {
                return Err(Error::InvalidCurve(format!(
                    "peak-unity curve has maximum {peak}"
                )));
            }
        }
        Ok(())
    }

    pub fn positions_y(&self) -> &[f64] {
        &self.positions_y
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sum of samples; the discrete total flux on this grid.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Copy with every value multiplied by `factor`, tagged raw.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.positions_y.clone(),
            self.thetas.clone(),
            self.values.iter().map(|v| v * factor).collect(),
            Normalization::Raw,
            self.kind,
        )
    }
}

/// Screen positions with their envelope argument and raw intensity.
pub(crate) struct SampledIntensity {
    pub positions_y: Vec<f64>,
    pub thetas: Vec<f64>,
    pub intensity: Vec<f64>,
}

/// Radiation intensity (unit analytic peak) at each position.
pub(crate) fn sample_intensity(
    geom: &ExperimentGeometry,
    k_pilot: f64,
    positions_y: Vec<f64>,
) -> Result<SampledIntensity> {
    geom.validate()?;
    let mut thetas = Vec::with_capacity(positions_y.len());
    let mut intensity = Vec::with_capacity(positions_y.len());
    for &y in &positions_y {
        let theta = theta_of_y(y, geom, k_pilot)?;
        let phi = phase_of_y(y, geom, k_pilot)?;
        thetas.push(theta);
        intensity.push(multi_slit_intensity(theta, phi, geom.n_slits));
    }
    Ok(SampledIntensity { positions_y, thetas, intensity })
}

/// Divide by the sample maximum.
pub(crate) fn peak_normalize(values: &mut [f64]) -> Result<()> {
    let peak = values.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::InvalidCurve(
            "pattern is zero on every grid point; cannot peak-normalize".into(),
        ));
    }
    for v in values.iter_mut() {
        *v /= peak;
    }
    Ok(())
}

/// Occurrence probability at each intensity, before peak normalization.
///
/// At zero coupling the transform degenerates to the identity on shape, so
/// the intensity itself is returned.
pub(crate) fn sed_values(intensity: &[f64], thermo: &BeamThermo) -> Vec<f64> {
    let b = thermo.beta_e0();
    if b == 0.0 {
        intensity.to_vec()
    } else {
        intensity.iter().map(|&i| trapping_probability(b * i)).collect()
    }
}

/// Radiation intensity and particle occurrence probability on one grid,
/// each scaled so its largest sample is exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternPair {
    pub radiation: PatternCurve,
    pub sed: PatternCurve,
}

pub fn generate_pattern(
    geom: &ExperimentGeometry,
    thermo: &BeamThermo,
    k_pilot: f64,
    grid: &GridSpec,
) -> Result<PatternPair> {
    let positions = grid.positions(geom, k_pilot)?;
    let sampled = sample_intensity(geom, k_pilot, positions)?;

    let mut sed = sed_values(&sampled.intensity, thermo);
    peak_normalize(&mut sed)?;
    let mut radiation = sampled.intensity;
    peak_normalize(&mut radiation)?;

    Ok(PatternPair {
        radiation: PatternCurve::new(
            sampled.positions_y.clone(),
            sampled.thetas.clone(),
            radiation,
            Normalization::PeakUnity,
            CurveKind::RadiationIntensity,
        )?,
        sed: PatternCurve::new(
            sampled.positions_y,
            sampled.thetas,
            sed,
            Normalization::PeakUnity,
            CurveKind::SedProbability,
        )?,
    })
}

/// Predictions for a double slit with one slit blocked mid-run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockedSlitPrediction {
    /// Two-slit fringes persist at half the raw intensity.
    pub sed_prediction: PatternCurve,
    /// Single-slit envelope carrying the same total flux as `sed_prediction`.
    pub orthodox_prediction: PatternCurve,
}

/// Blocking one slit of a double slit after the guiding field is set up.
///
/// The pilot-wave picture keeps the two-slit pattern (the guiding field still
/// spans both slits) but halves its intensity. The orthodox picture gives the
/// single-slit pattern of the open slit. Both outputs are tagged raw and
/// scaled against the peak-unity two-slit particle pattern. In the far field
/// the lateral offset of the open slit only adds a phase, so the envelope is
/// evaluated at the origin.
pub fn predict_blocked_slit(
    geom: &ExperimentGeometry,
    thermo: &BeamThermo,
    k_pilot: f64,
    grid: &GridSpec,
) -> Result<BlockedSlitPrediction> {
    if geom.n_slits != 2 {
        return Err(Error::Precondition(format!(
            "blocked-slit prediction needs exactly two slits, got {}",
            geom.n_slits
        )));
    }
    let two = generate_pattern(geom, thermo, k_pilot, grid)?;
    let open = ExperimentGeometry { n_slits: 1, slit_separation: None, ..*geom };
    let one = generate_pattern(&open, thermo, k_pilot, grid)?;

    let sed_prediction = two.sed.scaled(0.5)?;
    let flux_ratio = sed_prediction.total() / one.sed.total();
    let orthodox_prediction = one.sed.scaled(flux_ratio)?;
    Ok(BlockedSlitPrediction { sed_prediction, orthodox_prediction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single() -> ExperimentGeometry {
        ExperimentGeometry::single_slit(2e-5, 5.0).unwrap()
    }

    fn k() -> f64 {
        2.0 * PI / 2e-9
    }

    #[test]
    fn rejects_bad_curves() {
        let mk = |v: Vec<f64>, n| {
            PatternCurve::new(vec![0.0, 1.0], vec![0.0, 1.0], v, n, CurveKind::SedProbability)
        };
        assert!(mk(vec![1.0, 0.5], Normalization::PeakUnity).is_ok());
        assert!(mk(vec![0.9, 0.5], Normalization::PeakUnity).is_err());
        assert!(mk(vec![-0.1, 0.5], Normalization::Raw).is_err());
        assert!(mk(vec![1.0], Normalization::Raw).is_err());
        assert!(PatternCurve::new(
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            Normalization::Raw,
            CurveKind::SedProbability
        )
        .is_err());
    }

    #[test]
    fn peaks_are_exactly_one_at_center() {
        let grid = GridSpec::theta_span(3.0 * PI, 2001);
        let pair = generate_pattern(&single(), &BeamThermo::new(0.5).unwrap(), k(), &grid).unwrap();
        for c in [&pair.radiation, &pair.sed] {
            assert_eq!(c.values()[1000], 1.0);
            assert_eq!(c.peak(), 1.0);
            assert_eq!(c.thetas()[1000], 0.0);
        }
    }

    #[test]
    fn zero_coupling_curves_coincide() {
        let grid = GridSpec::theta_span(3.0 * PI, 501);
        let pair = generate_pattern(&single(), &BeamThermo::new(0.0).unwrap(), k(), &grid).unwrap();
        assert_eq!(pair.radiation.values(), pair.sed.values());
    }

    #[test]
    fn grid_without_center_still_peaks_at_one() {
        let grid = GridSpec::theta_span(3.0 * PI, 200);
        let pair = generate_pattern(&single(), &BeamThermo::new(0.5).unwrap(), k(), &grid).unwrap();
        assert!((pair.radiation.peak() - 1.0).abs() <= 1e-12);
        assert!((pair.sed.peak() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn blocked_slit_needs_two_slits() {
        let grid = GridSpec::theta_span(PI, 11);
        let err = predict_blocked_slit(&single(), &BeamThermo::new(0.5).unwrap(), k(), &grid);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn blocked_slit_halves_two_slit_pattern() {
        let geom = ExperimentGeometry::multi_slit(2, 2e-5, 8e-5, 5.0).unwrap();
        let thermo = BeamThermo::new(0.5).unwrap();
        let grid = GridSpec::theta_span(3.0 * PI, 1001);
        let two = generate_pattern(&geom, &thermo, k(), &grid).unwrap();
        let p = predict_blocked_slit(&geom, &thermo, k(), &grid).unwrap();
        for (h, f) in p.sed_prediction.values().iter().zip(two.sed.values()) {
            assert_eq!(*h, 0.5 * f);
        }
        assert_eq!(p.sed_prediction.normalization(), Normalization::Raw);
        assert!((p.orthodox_prediction.total() - p.sed_prediction.total()).abs() < 1e-9);
    }
}
