//! χ² regression of the radiation pattern against particle-beam data, with
//! the slit width as the only free parameter.
//!
//! Both curves are peak-unity, so amplitude is fixed. The objective is
//! evaluated on the samples of the data curve that fall inside
//! `|θ| <= theta_range`.
//!
//! With counting-statistics weights the objective has small kinks wherever a
//! model node crosses a bin center, so [`fit_width`] scans the bounds on a
//! fine grid first and refines the best grid cell with Brent's method.

mod minimize;

pub use minimize::{brent, Minimum};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ExperimentGeometry, GridSpec};
use crate::intensity::multi_slit_intensity;
use crate::pattern::{generate_pattern, Normalization, PatternCurve};
use crate::thermo::BeamThermo;

/// Floor on the model value in Poisson weights; keeps node bins finite.
pub const POISSON_FLOOR: f64 = 1e-6;

/// Number of scan points across the width-scale bounds.
pub const SCAN_POINTS: usize = 401;

const MAX_REFINE_ITERATIONS: usize = 200;
const GRID_MATCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weighting {
    Uniform,
    /// Counting statistics: `w_i = total_counts / max(model_i, POISSON_FLOOR)`.
    Poisson { total_counts: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub width_scale_bounds: (f64, f64),
    pub tolerance: f64,
    pub weighting: Weighting,
    pub bins: usize,
    pub theta_range: f64,
}

impl Default for FitConfig {
    /// Counting-statistics weights over the central maximum and the first
    /// side lobe on each side (|θ| <= 2π), 201 bins.
    fn default() -> Self {
        Self {
            width_scale_bounds: (0.8, 1.2),
            tolerance: 1e-6,
            weighting: Weighting::Poisson { total_counts: 1e6 },
            bins: 201,
            theta_range: 2.0 * PI,
        }
    }
}

impl FitConfig {
    /// Unit weights over |θ| <= 3π.
    pub fn uniform_wide() -> Self {
        Self { weighting: Weighting::Uniform, theta_range: 3.0 * PI, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.width_scale_bounds;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < 1.0 && hi > 1.0) {
            return Err(Error::InvalidFitConfig(format!(
                "width scale bounds must be ordered, positive and contain 1, got [{lo}, {hi}]"
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidFitConfig(format!(
                "tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if self.bins < 11 || self.bins.is_multiple_of(2) {
            return Err(Error::InvalidFitConfig(format!(
                "bins must be odd and >= 11, got {}",
                self.bins
            )));
        }
        if !(self.theta_range.is_finite() && self.theta_range > 0.0) {
            return Err(Error::InvalidFitConfig(format!(
                "theta range must be > 0, got {}",
                self.theta_range
            )));
        }
        if let Weighting::Poisson { total_counts } = self.weighting {
            if !(total_counts.is_finite() && total_counts > 0.0) {
                return Err(Error::InvalidFitConfig(format!(
                    "total counts must be > 0, got {total_counts}"
                )));
            }
        }
        Ok(())
    }

    /// Grid the fit data is generated on: `bins` points over ±`theta_range`.
    pub fn grid(&self) -> GridSpec {
        GridSpec::theta_span(self.theta_range, self.bins)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinChi2 {
    pub y_m: f64,
    pub theta: f64,
    pub chi2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chi2 {
    pub chi2_total: f64,
    pub chi2_per_bin: Vec<BinChi2>,
}

/// Pre-validated window of the data and the geometry to scale.
struct Objective {
    positions_y: Vec<f64>,
    thetas: Vec<f64>,
    data: Vec<f64>,
    phi_per_meter: f64,
    geom: ExperimentGeometry,
    k_pilot: f64,
    weighting: Weighting,
}

impl Objective {
    fn new(
        data: &PatternCurve,
        geom: &ExperimentGeometry,
        k_pilot: f64,
        config: &FitConfig,
    ) -> Result<Self> {
        config.validate()?;
        geom.validate()?;
        if !(k_pilot.is_finite() && k_pilot > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "pilot wave number must be positive, got {k_pilot}"
            )));
        }
        if data.normalization() != Normalization::PeakUnity {
            return Err(Error::InvalidCurve("fit data must be peak-unity normalized".into()));
        }

        let per_meter = geom.theta_per_meter(k_pilot);
        for (&y, &theta) in data.positions_y().iter().zip(data.thetas()) {
            let expected = per_meter * y;
            let scale = expected.abs().max(1.0);
            if (theta - expected).abs() > GRID_MATCH_TOLERANCE * scale {
                return Err(Error::GridMismatch(format!(
                    "sample at y = {y} carries theta = {theta}, geometry gives {expected}"
                )));
            }
        }

        let limit = config.theta_range * (1.0 + 1e-12);
        let mut positions_y = Vec::new();
        let mut thetas = Vec::new();
        let mut values = Vec::new();
        for i in 0..data.len() {
            if data.thetas()[i].abs() <= limit {
                positions_y.push(data.positions_y()[i]);
                thetas.push(data.thetas()[i]);
                values.push(data.values()[i]);
            }
        }
        if positions_y.is_empty() {
            return Err(Error::EmptyWindow(config.theta_range));
        }

        Ok(Self {
            positions_y,
            thetas,
            data: values,
            phi_per_meter: geom.phase_per_meter(k_pilot),
            geom: *geom,
            k_pilot,
            weighting: config.weighting,
        })
    }

    /// Peak-normalized radiation model with the slit width scaled by `s`.
    fn model(&self, s: f64) -> Vec<f64> {
        let scaled = ExperimentGeometry { slit_width: self.geom.slit_width * s, ..self.geom };
        let per_meter = scaled.theta_per_meter(self.k_pilot);
        let mut m: Vec<f64> = self
            .positions_y
            .iter()
            .map(|&y| multi_slit_intensity(per_meter * y, self.phi_per_meter * y, self.geom.n_slits))
            .collect();
        let peak = m.iter().copied().fold(0.0, f64::max);
        if peak > 0.0 {
            m.iter_mut().for_each(|v| *v /= peak);
        }
        m
    }

    fn per_bin(&self, s: f64) -> Vec<f64> {
        self.model(s)
            .iter()
            .zip(&self.data)
            .map(|(&m, &d)| {
                let w = match self.weighting {
                    Weighting::Uniform => 1.0,
                    Weighting::Poisson { total_counts } => total_counts / m.max(POISSON_FLOOR),
                };
                w * (m - d) * (m - d)
            })
            .collect()
    }

    fn total(&self, s: f64) -> f64 {
        self.per_bin(s).iter().sum()
    }

    fn chi2(&self, s: f64) -> Chi2 {
        let per_bin = self.per_bin(s);
        let chi2_total = per_bin.iter().sum();
        let chi2_per_bin = per_bin
            .into_iter()
            .zip(self.positions_y.iter().zip(&self.thetas))
            .map(|(chi2, (&y_m, &theta))| BinChi2 { y_m, theta, chi2 })
            .collect();
        Chi2 { chi2_total, chi2_per_bin }
    }
}

fn check_in_bounds(s: f64, config: &FitConfig) -> Result<()> {
    let (lo, hi) = config.width_scale_bounds;
    if !(lo..=hi).contains(&s) {
        return Err(Error::InvalidFitConfig(format!(
            "width scale {s} is outside the bounds [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// χ² of the width-scaled radiation model against `data`.
pub fn chi2_objective(
    data: &PatternCurve,
    width_scale: f64,
    geom: &ExperimentGeometry,
    k_pilot: f64,
    config: &FitConfig,
) -> Result<Chi2> {
    let objective = Objective::new(data, geom, k_pilot, config)?;
    check_in_bounds(width_scale, config)?;
    Ok(objective.chi2(width_scale))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub width_scale: f64,
    pub width_reduction_percent: f64,
    pub chi2_total: f64,
    pub chi2_per_bin: Vec<BinChi2>,
    pub optimizer_evaluations: usize,
    pub config_echo: FitConfig,
}

/// Best-fit slit-width multiplier for `data`.
///
/// Fails with [`Error::BracketExhausted`] if the minimum sits on a bound.
pub fn fit_width(
    data: &PatternCurve,
    geom: &ExperimentGeometry,
    k_pilot: f64,
    config: &FitConfig,
) -> Result<FitReport> {
    let objective = Objective::new(data, geom, k_pilot, config)?;
    let (lo, hi) = config.width_scale_bounds;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let scale_at = |i: usize| if i == SCAN_POINTS - 1 { hi } else { lo + step * i as f64 };

    let mut best = (0, f64::INFINITY);
    for i in 0..SCAN_POINTS {
        let v = objective.total(scale_at(i));
        if v < best.1 {
            best = (i, v);
        }
    }
    let exhausted = |scale| Error::BracketExhausted { scale, lower: lo, upper: hi };
    if best.0 == 0 || best.0 == SCAN_POINTS - 1 {
        return Err(exhausted(scale_at(best.0)));
    }

    let refined = brent(
        |s| objective.total(s),
        scale_at(best.0 - 1),
        scale_at(best.0 + 1),
        config.tolerance,
        MAX_REFINE_ITERATIONS,
    );
    let width_scale = if refined.fx <= best.1 { refined.x } else { scale_at(best.0) };
    if width_scale - lo <= config.tolerance || hi - width_scale <= config.tolerance {
        return Err(exhausted(width_scale));
    }

    let Chi2 { chi2_total, chi2_per_bin } = objective.chi2(width_scale);
    Ok(FitReport {
        width_scale,
        width_reduction_percent: 100.0 * (1.0 - width_scale),
        chi2_total,
        chi2_per_bin,
        optimizer_evaluations: SCAN_POINTS + refined.evaluations,
        config_echo: *config,
    })
}

/// Signed model-minus-data residuals on the fit window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualCurve {
    pub positions_y: Vec<f64>,
    pub thetas: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl ResidualCurve {
    pub fn max_abs(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishabilityReport {
    pub fit: FitReport,
    /// χ² with the true slit width, before fitting.
    pub chi2_unscaled: f64,
    pub max_abs_residual_unscaled: f64,
    pub max_abs_residual_at_fit: f64,
    pub residual_curve: ResidualCurve,
}

/// Generate particle-beam data on the fit grid, fit the radiation pattern to
/// it and report how far apart the two remain.
pub fn distinguishability_report(
    geom: &ExperimentGeometry,
    thermo: &BeamThermo,
    k_pilot: f64,
    config: &FitConfig,
) -> Result<DistinguishabilityReport> {
    config.validate()?;
    let data = generate_pattern(geom, thermo, k_pilot, &config.grid())?.sed;
    let fit = fit_width(&data, geom, k_pilot, config)?;
    let objective = Objective::new(&data, geom, k_pilot, config)?;

    let residuals = |s: f64| -> Vec<f64> {
        objective.model(s).iter().zip(&objective.data).map(|(m, d)| m - d).collect()
    };
    let unscaled = ResidualCurve {
        positions_y: objective.positions_y.clone(),
        thetas: objective.thetas.clone(),
        residuals: residuals(1.0),
    };
    let residual_curve = ResidualCurve { residuals: residuals(fit.width_scale), ..unscaled.clone() };

    Ok(DistinguishabilityReport {
        chi2_unscaled: objective.total(1.0),
        max_abs_residual_unscaled: unscaled.max_abs(),
        max_abs_residual_at_fit: residual_curve.max_abs(),
        residual_curve,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::CurveKind;

    fn setup() -> (ExperimentGeometry, f64) {
        (ExperimentGeometry::single_slit(2e-5, 5.0).unwrap(), 2.0 * PI / 2e-9)
    }

    fn sed_data(beta: f64, config: &FitConfig) -> PatternCurve {
        let (g, k) = setup();
        generate_pattern(&g, &BeamThermo::new(beta).unwrap(), k, &config.grid()).unwrap().sed
    }

    #[test]
    fn config_validation() {
        assert!(FitConfig::default().validate().is_ok());
        let bad = [
            FitConfig { width_scale_bounds: (1.1, 1.2), ..FitConfig::default() },
            FitConfig { width_scale_bounds: (1.2, 0.8), ..FitConfig::default() },
            FitConfig { bins: 10, ..FitConfig::default() },
            FitConfig { bins: 9, ..FitConfig::default() },
            FitConfig { tolerance: 0.0, ..FitConfig::default() },
            FitConfig { theta_range: -1.0, ..FitConfig::default() },
            FitConfig { weighting: Weighting::Poisson { total_counts: 0.0 }, ..FitConfig::default() },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn self_fit_is_zero() {
        let (g, k) = setup();
        let cfg = FitConfig::default();
        let data = generate_pattern(&g, &BeamThermo::new(0.5).unwrap(), k, &cfg.grid())
            .unwrap()
            .radiation;
        let chi2 = chi2_objective(&data, 1.0, &g, k, &cfg).unwrap();
        assert_eq!(chi2.chi2_total, 0.0);
    }

    #[test]
    fn peak_bin_has_zero_residual() {
        let (g, k) = setup();
        let cfg = FitConfig::uniform_wide();
        let chi2 = chi2_objective(&sed_data(0.5, &cfg), 1.0, &g, k, &cfg).unwrap();
        assert!(chi2.chi2_total > 0.0);
        let center = chi2.chi2_per_bin.len() / 2;
        assert_eq!(chi2.chi2_per_bin[center].theta, 0.0);
        assert_eq!(chi2.chi2_per_bin[center].chi2, 0.0);
        let max = chi2.chi2_per_bin.iter().map(|b| b.chi2).fold(0.0, f64::max);
        let argmax = chi2.chi2_per_bin.iter().find(|b| b.chi2 == max).unwrap();
        assert!(argmax.theta.abs() > 0.5, "max at {}", argmax.theta);
    }

    #[test]
    fn per_bin_is_even() {
        let (g, k) = setup();
        for cfg in [FitConfig::default(), FitConfig::uniform_wide()] {
            let bins = chi2_objective(&sed_data(0.5, &cfg), 0.97, &g, k, &cfg).unwrap().chi2_per_bin;
            let n = bins.len();
            for i in 0..n / 2 {
                let (a, b) = (bins[i].chi2, bins[n - 1 - i].chi2);
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "{i}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rejects_mismatched_grid_and_empty_window() {
        let (g, k) = setup();
        let cfg = FitConfig::default();
        let data = sed_data(0.5, &cfg);
        let other = g.with_width_scale(1.1).unwrap();
        assert!(matches!(
            chi2_objective(&data, 1.0, &other, k, &cfg),
            Err(Error::GridMismatch(_))
        ));

        let off_center = PatternCurve::new(
            vec![1.0, 2.0],
            vec![g.theta_per_meter(k), 2.0 * g.theta_per_meter(k)],
            vec![1.0, 0.5],
            Normalization::PeakUnity,
            CurveKind::SedProbability,
        )
        .unwrap();
        let narrow = FitConfig { theta_range: 1e-3, ..cfg };
        assert!(matches!(
            chi2_objective(&off_center, 1.0, &g, k, &narrow),
            Err(Error::EmptyWindow(_))
        ));
    }

    #[test]
    fn raw_data_rejected() {
        let (g, k) = setup();
        let cfg = FitConfig::default();
        let raw = sed_data(0.5, &cfg).scaled(0.5).unwrap();
        assert!(matches!(chi2_objective(&raw, 1.0, &g, k, &cfg), Err(Error::InvalidCurve(_))));
        assert!(chi2_objective(&sed_data(0.5, &cfg), 1.3, &g, k, &cfg).is_err());
    }

    #[test]
    fn bound_minimum_is_an_error() {
        let (g, k) = setup();
        let cfg = FitConfig { width_scale_bounds: (0.5, 1.2), ..FitConfig::default() };
        // Data from a slit 40% narrower than assumed: optimum near 0.6, outside [0.7, 1.2].
        let narrow = g.with_width_scale(0.6).unwrap();
        let data = generate_pattern(&narrow, &BeamThermo::new(0.0).unwrap(), k, &GridSpec::Explicit {
            positions: cfg.grid().positions(&g, k).unwrap(),
        })
        .unwrap()
        .radiation;
        let data = PatternCurve::new(
            data.positions_y().to_vec(),
            data.positions_y().iter().map(|y| g.theta_per_meter(k) * y).collect(),
            data.values().to_vec(),
            Normalization::PeakUnity,
            CurveKind::RadiationIntensity,
        )
        .unwrap();
        let tight = FitConfig { width_scale_bounds: (0.7, 1.2), ..cfg };
        assert!(matches!(fit_width(&data, &g, k, &tight), Err(Error::BracketExhausted { .. })));
        let fit = fit_width(&data, &g, k, &cfg).unwrap();
        assert!((fit.width_scale - 0.6).abs() < 1e-5, "{}", fit.width_scale);
    }

    #[test]
    fn zero_coupling_fits_unit_scale() {
        let (g, k) = setup();
        let cfg = FitConfig::default();
        let fit = fit_width(&sed_data(0.0, &cfg), &g, k, &cfg).unwrap();
        assert!((fit.width_scale - 1.0).abs() <= cfg.tolerance, "{}", fit.width_scale);
        assert!(fit.chi2_total < 1e-6);
        let sum: f64 = fit.chi2_per_bin.iter().map(|b| b.chi2).sum();
        assert_eq!(sum, fit.chi2_total);
    }

    #[test]
    fn report_serializes_expected_keys() {
        let (g, k) = setup();
        let cfg = FitConfig::default();
        let fit = fit_width(&sed_data(0.2, &cfg), &g, k, &cfg).unwrap();
        let json = serde_json::to_value(&fit).unwrap();
        let keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        let mut expected = vec![
            "chi2_per_bin",
            "chi2_total",
            "config_echo",
            "optimizer_evaluations",
            "width_reduction_percent",
            "width_scale",
        ];
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
        assert!(json["chi2_per_bin"][0]["theta"].is_number());
    }
}
