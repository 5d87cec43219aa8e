//! Slit geometry and the lateral-position to phase maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiplier that turns the default `k (2a/D) y` map into the textbook
/// Fraunhofer half-phase `(k a / 2)(y / D)`.
pub const FRAUNHOFER_GEOMETRY_FACTOR: f64 = 0.25;

/// Slit arrangement and screen placement.
///
/// Lengths are in meters. `slit_separation` is center-to-center and only
/// consulted when `n_slits > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGeometry {
    pub n_slits: u32,
    pub slit_width: f64,
    pub slit_separation: Option<f64>,
    pub screen_distance: f64,
    pub geometry_factor: f64,
}

impl ExperimentGeometry {
    pub fn single_slit(slit_width: f64, screen_distance: f64) -> Result<Self> {
        Self {
            n_slits: 1,
            slit_width,
            slit_separation: None,
            screen_distance,
            geometry_factor: 1.0,
        }
        .validated()
    }

    pub fn multi_slit(
        n_slits: u32,
        slit_width: f64,
        slit_separation: f64,
        screen_distance: f64,
    ) -> Result<Self> {
        Self {
            n_slits,
            slit_width,
            slit_separation: Some(slit_separation),
            screen_distance,
            geometry_factor: 1.0,
        }
        .validated()
    }

    pub fn with_geometry_factor(mut self, factor: f64) -> Result<Self> {
        self.geometry_factor = factor;
        self.validated()
    }

    /// Same geometry with the slit width multiplied by `scale`; separation
    /// and screen distance are unchanged.
    pub fn with_width_scale(mut self, scale: f64) -> Result<Self> {
        self.slit_width *= scale;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.n_slits == 0 {
            return Err(Error::InvalidGeometry("n_slits must be >= 1".into()));
        }
        if !positive(self.slit_width) {
            return Err(Error::InvalidGeometry(format!(
                "slit width must be a positive length, got {}",
                self.slit_width
            )));
        }
        if !positive(self.screen_distance) {
            return Err(Error::InvalidGeometry(format!(
                "screen distance must be a positive length, got {}",
                self.screen_distance
            )));
        }
        if !positive(self.geometry_factor) {
            return Err(Error::InvalidGeometry(format!(
                "geometry factor must be positive, got {}",
                self.geometry_factor
            )));
        }
        if self.n_slits > 1 {
            match self.slit_separation {
                None => {
                    return Err(Error::InvalidGeometry(format!(
                        "slit separation is required for {} slits",
                        self.n_slits
                    )))
                }
                Some(sep) if !(sep.is_finite() && sep > self.slit_width) => {
                    return Err(Error::InvalidGeometry(format!(
                        "slit separation ({sep}) must exceed the slit width ({})",
                        self.slit_width
                    )))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    /// dθ/dy for pilot wave number `k_pilot`.
    pub fn theta_per_meter(&self, k_pilot: f64) -> f64 {
        self.geometry_factor * k_pilot * (2.0 * self.slit_width / self.screen_distance)
    }

    /// dφ/dy: the θ map with the half-width replaced by half the separation.
    pub fn phase_per_meter(&self, k_pilot: f64) -> f64 {
        let sep = self.slit_separation.unwrap_or(0.0);
        self.geometry_factor * k_pilot * (sep / self.screen_distance)
    }
}

fn check_k(k_pilot: f64) -> Result<()> {
    if k_pilot.is_finite() && k_pilot > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!(
            "pilot wave number must be positive, got {k_pilot}"
        )))
    }
}

/// Envelope argument θ = factor · k · (2a/D) · y.
pub fn theta_of_y(y: f64, geom: &ExperimentGeometry, k_pilot: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::InvalidPosition(y));
    }
    check_k(k_pilot)?;
    Ok(geom.theta_per_meter(k_pilot) * y)
}

/// Inter-slit phase φ = factor · k · (separation/D) · y. Zero for one slit.
pub fn phase_of_y(y: f64, geom: &ExperimentGeometry, k_pilot: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::InvalidPosition(y));
    }
    check_k(k_pilot)?;
    Ok(geom.phase_per_meter(k_pilot) * y)
}

/// Inverse of [`theta_of_y`].
pub fn y_of_theta(theta: f64, geom: &ExperimentGeometry, k_pilot: f64) -> Result<f64> {
    check_k(k_pilot)?;
    Ok(theta / geom.theta_per_meter(k_pilot))
}

/// Sampling positions on the observation screen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    /// `points` samples evenly spaced in θ over `[-half_range, half_range]`.
    ThetaSpan { half_range: f64, points: usize },
    /// `points` samples evenly spaced in y over `[y_min, y_max]`.
    Uniform { y_min: f64, y_max: f64, points: usize },
    Explicit { positions: Vec<f64> },
}

impl GridSpec {
    pub fn theta_span(half_range: f64, points: usize) -> Self {
        GridSpec::ThetaSpan { half_range, points }
    }

    /// Resolve into strictly increasing screen positions (meters).
    pub fn positions(&self, geom: &ExperimentGeometry, k_pilot: f64) -> Result<Vec<f64>> {
        let ys = match self {
            GridSpec::ThetaSpan { half_range, points } => {
                if !(half_range.is_finite() && *half_range > 0.0) {
                    return Err(Error::InvalidGrid(format!(
                        "theta half-range must be positive, got {half_range}"
                    )));
                }
                let y_max = y_of_theta(*half_range, geom, k_pilot)?;
                linspace(-y_max, y_max, *points)?
            }
            GridSpec::Uniform { y_min, y_max, points } => {
                if !(y_min.is_finite() && y_max.is_finite() && y_min < y_max) {
                    return Err(Error::InvalidGrid(format!(
                        "need finite y_min < y_max, got [{y_min}, {y_max}]"
                    )));
                }
                linspace(*y_min, *y_max, *points)?
            }
            GridSpec::Explicit { positions } => positions.clone(),
        };
        if ys.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if let Some(bad) = ys.iter().find(|y| !y.is_finite()) {
            return Err(Error::InvalidPosition(*bad));
        }
        if ys.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid("positions must be strictly increasing".into()));
        }
        Ok(ys)
    }
}

/// Evenly spaced samples, symmetric about the midpoint so that an odd count
/// over a symmetric interval contains exactly 0.
fn linspace(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    match points {
        0 => Err(Error::InvalidGrid("grid needs at least one point".into())),
        1 => Ok(vec![0.5 * (lo + hi)]),
        n => {
            let last = (n - 1) as f64;
            let mid = 0.5 * last;
            let half = 0.5 * (hi - lo);
            let center = 0.5 * (lo + hi);
            Ok((0..n)
                .map(|i| center + half * ((i as f64 - mid) / mid))
                .collect())
        }
    }
}
