//! Fixtures shared by the benchmarks.

use std::f64::consts::PI;

use pilotwave_core::{BeamThermo, ExperimentGeometry, GridSpec};

pub struct Scenario {
    pub geom: ExperimentGeometry,
    pub thermo: BeamThermo,
    pub k_pilot: f64,
}

/// Single slit, 20 µm wide, screen at 5 m, 2 nm pilot wavelength.
pub fn single_slit(beta_e0: f64) -> Scenario {
    Scenario {
        geom: ExperimentGeometry::single_slit(2e-5, 5.0).expect("valid geometry"),
        thermo: BeamThermo::new(beta_e0).expect("valid coupling"),
        k_pilot: 2.0 * PI / 2e-9,
    }
}

pub fn multi_slit(n_slits: u32, beta_e0: f64) -> Scenario {
    Scenario {
        geom: ExperimentGeometry::multi_slit(n_slits, 2e-5, 8e-5, 5.0).expect("valid geometry"),
        ..single_slit(beta_e0)
    }
}

pub fn wide_grid(points: usize) -> GridSpec {
    GridSpec::theta_span(3.0 * PI, points)
}
