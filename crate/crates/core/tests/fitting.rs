//! Width-fit regression values. Expected numbers were computed with an
//! independent script (vectorized model, bounded scalar minimizer after a
//! 401-point scan) and frozen here.

use std::f64::consts::PI;

use pilotwave_core::{
    chi2_objective, distinguishability_report, fit_width, generate_pattern, BeamThermo,
    ExperimentGeometry, FitConfig,
};

const K_PILOT: f64 = 2.0 * PI / 2e-9;

fn single() -> ExperimentGeometry {
    ExperimentGeometry::single_slit(2e-5, 5.0).unwrap()
}

fn five_slit() -> ExperimentGeometry {
    ExperimentGeometry::multi_slit(5, 2e-5, 8e-5, 5.0).unwrap()
}

fn report(geom: &ExperimentGeometry, beta: f64, config: &FitConfig) -> pilotwave_core::DistinguishabilityReport {
    distinguishability_report(geom, &BeamThermo::new(beta).unwrap(), K_PILOT, config).unwrap()
}

#[test]
fn default_convention_reduction() {
    let cfg = FitConfig::default();
    let half = report(&single(), 0.5, &cfg);
    let fifth = report(&single(), 0.2, &cfg);
    assert!((half.fit.width_reduction_percent - 1.327_035).abs() < 1e-3, "{}", half.fit.width_reduction_percent);
    assert!((fifth.fit.width_reduction_percent - 0.729_504).abs() < 1e-3, "{}", fifth.fit.width_reduction_percent);
    assert!((half.max_abs_residual_unscaled - 0.062_268_569).abs() < 1e-8);
    assert!((half.max_abs_residual_at_fit - 0.052_241_968).abs() < 1e-4);
}

#[test]
fn uniform_wide_convention_reduction() {
    let cfg = FitConfig::uniform_wide();
    let half = report(&single(), 0.5, &cfg);
    let fifth = report(&single(), 0.2, &cfg);
    assert!((half.fit.width_reduction_percent - 5.424_583).abs() < 1e-3);
    assert!((fifth.fit.width_reduction_percent - 2.283_219).abs() < 1e-3);
}

#[test]
fn multislit_post_fit_below_single_slit_pre_fit() {
    let cfg = FitConfig::default();
    let single_pre = report(&single(), 0.5, &cfg).max_abs_residual_unscaled;
    let multi = report(&five_slit(), 0.5, &cfg);
    assert!((multi.fit.width_reduction_percent - 1.224_621).abs() < 1e-3);
    assert!((multi.max_abs_residual_at_fit - 0.059_616_376).abs() < 1e-4);
    assert!(multi.max_abs_residual_at_fit < single_pre);

    let two = report(&ExperimentGeometry::multi_slit(2, 2e-5, 8e-5, 5.0).unwrap(), 0.5, &cfg);
    assert!((two.max_abs_residual_at_fit - 0.061_464_811).abs() < 1e-4);
    assert!(two.max_abs_residual_at_fit < single_pre);
}

#[test]
fn fit_improves_objective_and_narrows_slit() {
    for cfg in [FitConfig::default(), FitConfig::uniform_wide()] {
        for beta in [0.05, 0.2, 0.5, 0.8] {
            let r = report(&single(), beta, &cfg);
            assert!(r.fit.width_scale < 1.0, "beta={beta}");
            assert!(r.fit.chi2_total <= r.chi2_unscaled);
            assert!(r.max_abs_residual_at_fit < r.max_abs_residual_unscaled);
        }
    }
}

#[test]
fn zero_coupling_residuals_vanish() {
    let r = report(&single(), 0.0, &FitConfig::default());
    assert!(r.residual_curve.max_abs() <= 1e-9);
    assert!((r.fit.width_scale - 1.0).abs() <= 1e-6);
}

#[test]
fn fits_are_bitwise_deterministic() {
    let cfg = FitConfig::default();
    let a = report(&single(), 0.5, &cfg);
    let b = report(&single(), 0.5, &cfg);
    assert_eq!(a, b);
    assert_eq!(a.fit.width_scale.to_bits(), b.fit.width_scale.to_bits());
}

#[test]
fn chi2_total_is_sum_of_bins() {
    let cfg = FitConfig::default();
    let data = generate_pattern(&single(), &BeamThermo::new(0.5).unwrap(), K_PILOT, &cfg.grid())
        .unwrap()
        .sed;
    let fit = fit_width(&data, &single(), K_PILOT, &cfg).unwrap();
    let sum: f64 = fit.chi2_per_bin.iter().map(|b| b.chi2).sum();
    assert!((sum - fit.chi2_total).abs() <= 1e-9 * fit.chi2_total);
    let at_one = chi2_objective(&data, 1.0, &single(), K_PILOT, &cfg).unwrap();
    assert!(fit.chi2_total <= at_one.chi2_total);
    let (lo, hi) = cfg.width_scale_bounds;
    assert!(fit.width_scale > lo && fit.width_scale < hi);
}
