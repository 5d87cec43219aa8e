use std::f64::consts::PI;

use pilotwave_core::{
    generate_pattern, modulated_wave, multi_slit_intensity, sed_probability, single_slit_intensity,
    standing_wave, BeamThermo, ExperimentGeometry, GridSpec, WaveKinematics,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn single_slit_even_and_bounded(theta in -200.0f64..200.0) {
        let v = single_slit_intensity(theta);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(v, single_slit_intensity(-theta));
    }

    #[test]
    fn single_slit_nodes(m in 1i32..200) {
        prop_assert!(single_slit_intensity(f64::from(m) * PI) < 1e-25);
    }

    #[test]
    fn one_slit_grating_is_envelope(theta in -50.0f64..50.0, phi in -50.0f64..50.0) {
        prop_assert_eq!(multi_slit_intensity(theta, phi, 1), single_slit_intensity(theta));
    }

    #[test]
    fn multi_slit_bounded(theta in -50.0f64..50.0, phi in -50.0f64..50.0, n in 1u32..12) {
        let v = multi_slit_intensity(theta, phi, n);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn probability_monotone(i1 in 0.0f64..=1.0, i2 in 0.0f64..=1.0, b1 in 0.0f64..=1.0, b2 in 0.0f64..=1.0) {
        let t = BeamThermo::new(b1).unwrap();
        let (lo, hi) = if i1 <= i2 { (i1, i2) } else { (i2, i1) };
        prop_assert!(sed_probability(lo, &t).unwrap() <= sed_probability(hi, &t).unwrap());
        let (blo, bhi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        let p_lo = sed_probability(i1, &BeamThermo::new(blo).unwrap()).unwrap();
        let p_hi = sed_probability(i1, &BeamThermo::new(bhi).unwrap()).unwrap();
        prop_assert!(p_lo <= p_hi);
    }

    #[test]
    fn probability_first_order_remainder(i in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let p = sed_probability(i, &BeamThermo::new(b).unwrap()).unwrap();
        let x = b * i;
        prop_assert!((p - x).abs() <= x * x / 2.0 + 1e-16);
    }

    #[test]
    fn rest_frame_wave(x in -1e3f64..1e3, t in -1e-5f64..1e-5, k0 in 1e-3f64..1e3) {
        let kin = WaveKinematics::new(k0, 0.0).unwrap();
        prop_assert_eq!(modulated_wave(x, t, &kin), standing_wave(x, t, &kin));
    }

    #[test]
    fn generated_patterns_are_peak_unity(
        beta in 0.0f64..=1.0,
        n in 1u32..7,
        half in 0.5f64..20.0,
        points in 3usize..400,
    ) {
        let geom = if n == 1 {
            ExperimentGeometry::single_slit(2e-5, 5.0).unwrap()
        } else {
            ExperimentGeometry::multi_slit(n, 2e-5, 7e-5, 5.0).unwrap()
        };
        let grid = GridSpec::theta_span(half, points | 1);
        let pair = generate_pattern(&geom, &BeamThermo::new(beta).unwrap(), 3e9, &grid).unwrap();
        let mid = (points | 1) / 2;
        for c in [&pair.radiation, &pair.sed] {
            prop_assert!((c.peak() - 1.0).abs() <= 1e-12);
            prop_assert_eq!(c.values()[mid], 1.0);
        }
    }
}
