//! Diffraction patterns for radiation and for particle beams trapped in the
//! wells of a pilot wave, and the tools to tell them apart.
//!
//! A particle beam in thermal contact with a background field occupies each
//! intensity well with probability `1 - exp(-βE₀ · I)`, where `I` is the
//! peak-normalized radiation intensity. For small `βE₀` this reduces to the
//! radiation pattern. The crate provides:
//!
//! - slit intensities and the occurrence-probability transform ([`generate_pattern`]),
//! - a width-only χ² fit of the radiation pattern to particle data ([`fitting`]),
//! - a Monte-Carlo ensemble that checks the closed form ([`montecarlo`]),
//! - the moving-frame standing wave and de Broglie quantities ([`kinematics`]),
//! - coherence and spin-population estimates ([`estimates`]).

pub mod constants;
mod error;
pub mod estimates;
pub mod fitting;
pub mod geometry;
pub mod intensity;
pub mod kinematics;
pub mod montecarlo;
pub mod pattern;
pub mod sed;
pub mod thermo;

pub use error::{Error, Result};
pub use estimates::{
    coherence_length, coherence_width, spin_population_ratio, CoherenceInputs, CoherenceWidth,
};
pub use fitting::{
    chi2_objective, distinguishability_report, fit_width, BinChi2, Chi2, DistinguishabilityReport,
    FitConfig, FitReport, ResidualCurve, Weighting,
};
pub use geometry::{
    phase_of_y, theta_of_y, y_of_theta, ExperimentGeometry, GridSpec, FRAUNHOFER_GEOMETRY_FACTOR,
};
pub use intensity::{interference_factor, multi_slit_intensity, single_slit_intensity};
pub use kinematics::{
    de_broglie, modulated_wave, modulated_wave_factors, standing_wave, DeBroglie, WaveKinematics,
};
pub use montecarlo::{
    oracle_report, sample_trapping, sample_trapping_with_workers, trap_counts, EnsembleConfig,
    OracleBin, OracleReport, TrappingHistogram,
};
pub use pattern::{
    generate_pattern, predict_blocked_slit, BlockedSlitPrediction, CurveKind, Normalization,
    PatternCurve, PatternPair,
};
pub use sed::{sed_probability, well_occupancy};
pub use thermo::BeamThermo;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
