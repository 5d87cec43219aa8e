use std::f64::consts::PI;

use pilotwave_core::{
    oracle_report, sample_trapping_with_workers, BeamThermo, EnsembleConfig, ExperimentGeometry,
    GridSpec,
};

fn config(beta: f64, n: u64, seed: u64) -> EnsembleConfig {
    let geom = ExperimentGeometry::single_slit(2e-5, 5.0).unwrap();
    EnsembleConfig::from_geometry(
        &geom,
        BeamThermo::new(beta).unwrap(),
        2.0 * PI / 2e-9,
        &GridSpec::theta_span(3.0 * PI, 201),
        n,
        seed,
    )
    .unwrap()
}

#[test]
fn matched_model_passes() {
    let r = oracle_report(&config(0.5, 1_000_000, 42), None, None).unwrap();
    assert!(r.pass, "max |z| = {}", r.max_z_score);
    assert_eq!(r.per_bin_z.len(), 201);
}

#[test]
fn small_ensemble_matched_passes() {
    let r = oracle_report(&config(0.5, 10_000, 42), None, None).unwrap();
    assert!(r.pass, "max |z| = {}", r.max_z_score);
}

#[test]
fn mismatched_coupling_fails() {
    let expect = BeamThermo::new(0.25).unwrap();
    let r = oracle_report(&config(0.5, 1_000_000, 42), Some(&expect), None).unwrap();
    assert!(!r.pass);
    assert!(r.max_z_score > 50.0, "{}", r.max_z_score);
}

#[test]
fn histogram_tracks_closed_form_shape() {
    let r = oracle_report(&config(0.5, 1_000_000, 7), None, None).unwrap();
    for b in &r.bins {
        assert!((b.normalized_value - b.expected_value).abs() < 0.01, "{b:?}");
    }
    let center = &r.bins[100];
    assert_eq!(center.bin_center_theta, 0.0);
    assert_eq!(center.normalized_value, 1.0);
}

#[test]
fn histogram_independent_of_workers() {
    let c = config(0.5, 200_000, 123);
    let one = sample_trapping_with_workers(&c, Some(1)).unwrap();
    let three = sample_trapping_with_workers(&c, Some(3)).unwrap();
    assert_eq!(one, three);
}
