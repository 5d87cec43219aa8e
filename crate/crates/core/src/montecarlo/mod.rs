//! Stochastic check of the trapping law.
//!
//! Each particle draws one energy from the Boltzmann density and is tested
//! against the well depth of every position bin; it counts as trapped in a
//! bin when its energy is below that bin's depth. The expected count in a bin
//! of depth `d` is `n (1 - e^(-β d))`.
//!
//! Energies are measured in units of the intensity scale, so a bin whose
//! peak-normalized intensity is `I` traps a particle with standard
//! exponential draw `x` iff `x < βE₀ · I`.

mod rng;

pub use rng::CounterRng;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ExperimentGeometry, GridSpec};
use crate::pattern::{generate_pattern, CurveKind, PatternCurve};
use crate::sed::trapping_probability;
use crate::thermo::BeamThermo;

/// Particles per work unit. Fixed so the partition never depends on the
/// number of workers.
const CHUNK: u64 = 1 << 14;

/// Pass threshold on every bin's |z|.
pub const Z_THRESHOLD: f64 = 4.0;

pub const MIN_PARTICLES: u64 = 10_000;
pub const MIN_BINS: usize = 11;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_particles: u64,
    pub seed: u64,
    pub n_position_bins: usize,
    pub thermo: BeamThermo,
    /// Peak-unity radiation intensity; the well depth in each bin is this
    /// value times the intensity scale.
    pub well_depth_profile: PatternCurve,
}

impl EnsembleConfig {
    /// Depth profile from the radiation pattern of `geom` over `grid`.
    pub fn from_geometry(
        geom: &ExperimentGeometry,
        thermo: BeamThermo,
        k_pilot: f64,
        grid: &GridSpec,
        n_particles: u64,
        seed: u64,
    ) -> Result<Self> {
        let profile = generate_pattern(geom, &thermo, k_pilot, grid)?.radiation;
        let config = Self {
            n_particles,
            seed,
            n_position_bins: profile.len(),
            thermo,
            well_depth_profile: profile,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_particles < MIN_PARTICLES {
            return Err(Error::InvalidEnsemble(format!(
                "need at least {MIN_PARTICLES} particles, got {}",
                self.n_particles
            )));
        }
        if self.n_position_bins < MIN_BINS {
            return Err(Error::InvalidEnsemble(format!(
                "need at least {MIN_BINS} position bins, got {}",
                self.n_position_bins
            )));
        }
        if self.well_depth_profile.len() != self.n_position_bins {
            return Err(Error::InvalidEnsemble(format!(
                "profile has {} samples but {} bins were requested",
                self.well_depth_profile.len(),
                self.n_position_bins
            )));
        }
        if self.well_depth_profile.kind() != CurveKind::RadiationIntensity {
            return Err(Error::InvalidEnsemble("depth profile must be a radiation intensity".into()));
        }
        if self.well_depth_profile.values().iter().any(|&v| v > 1.0) {
            return Err(Error::InvalidEnsemble("depth profile must not exceed 1".into()));
        }
        Ok(())
    }

    /// Trapping thresholds `βE₀ · I` per bin.
    pub fn thresholds(&self) -> Vec<f64> {
        let b = self.thermo.beta_e0();
        self.well_depth_profile.values().iter().map(|&i| b * i).collect()
    }
}

/// Trapped counts for thresholds `t_j` (β times depth): particle `i` is
/// trapped in bin `j` iff its standard exponential draw is below `t_j`.
///
/// `workers = None` uses the global rayon pool. The result does not depend
/// on the worker count.
pub fn trap_counts(
    thresholds: &[f64],
    n_particles: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<u64>> {
    if let Some(t) = thresholds.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(Error::InvalidEnsemble(format!("thresholds must be >= 0, got {t}")));
    }
    if thresholds.iter().all(|&t| t == 0.0) {
        return Err(Error::NoTrapping);
    }

    let mut order: Vec<usize> = (0..thresholds.len()).collect();
    order.sort_by(|&a, &b| thresholds[a].total_cmp(&thresholds[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&j| thresholds[j]).collect();

    let rng = CounterRng::new(seed);
    let n_chunks = n_particles.div_ceil(CHUNK);
    let bins = sorted.len();

    // first_trapped[k] counts particles whose draw traps them in sorted bins k.. (all t > x).
    let run = || -> Vec<u64> {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut local = vec![0u64; bins + 1];
                let start = c * CHUNK;
                let end = (start + CHUNK).min(n_particles);
                for i in start..end {
                    let x = rng.exponential(i);
                    local[sorted.partition_point(|&t| t <= x)] += 1;
                }
                local
            })
            .reduce(
                || vec![0u64; bins + 1],
                |mut a, b| {
                    a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    };
    let first_trapped = match workers {
        None => run(),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidEnsemble(format!("cannot start worker pool: {e}")))?
            .install(run),
    };

    let mut counts = vec![0u64; bins];
    let mut cumulative = 0u64;
    for (rank, &j) in order.iter().enumerate() {
        cumulative += first_trapped[rank];
        counts[j] = cumulative;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrappingHistogram {
    pub positions_y: Vec<f64>,
    pub thetas: Vec<f64>,
    pub trapped_counts: Vec<u64>,
    /// Counts divided by the largest count.
    pub normalized: Vec<f64>,
    pub n_particles: u64,
}

pub fn sample_trapping(config: &EnsembleConfig) -> Result<TrappingHistogram> {
    sample_trapping_with_workers(config, None)
}

pub fn sample_trapping_with_workers(
    config: &EnsembleConfig,
    workers: Option<usize>,
) -> Result<TrappingHistogram> {
    config.validate()?;
    let counts = trap_counts(&config.thresholds(), config.n_particles, config.seed, workers)?;
    let peak = counts.iter().copied().max().unwrap_or(0);
    if peak == 0 {
        return Err(Error::NoTrapping);
    }
    let profile = &config.well_depth_profile;
    Ok(TrappingHistogram {
        positions_y: profile.positions_y().to_vec(),
        thetas: profile.thetas().to_vec(),
        normalized: counts.iter().map(|&c| c as f64 / peak as f64).collect(),
        trapped_counts: counts,
        n_particles: config.n_particles,
    })
}

/// Binomial z-score of a trapped count against probability `p`.
pub fn binomial_z(count: u64, n: u64, p: f64) -> f64 {
    let n = n as f64;
    let mean = n * p;
    let var = n * p * (1.0 - p);
    let diff = count as f64 - mean;
    if var > 0.0 {
        diff / var.sqrt()
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleBin {
    pub bin_center_y: f64,
    pub bin_center_theta: f64,
    pub trapped_count: u64,
    pub normalized_value: f64,
    /// Closed-form probability, peak-normalized like `normalized_value`.
    pub expected_value: f64,
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub max_z_score: f64,
    pub per_bin_z: Vec<f64>,
    pub pass: bool,
    pub n_particles: u64,
    pub seed: u64,
    pub simulated_beta_e0: f64,
    pub expected_beta_e0: f64,
    /// Per-bin detail; written as CSV rather than JSON.
    #[serde(skip)]
    pub bins: Vec<OracleBin>,
}

/// Simulate with `config` and compare each bin against the closed form at
/// `expected` (defaults to the simulated coupling).
pub fn oracle_report(
    config: &EnsembleConfig,
    expected: Option<&BeamThermo>,
    workers: Option<usize>,
) -> Result<OracleReport> {
    let hist = sample_trapping_with_workers(config, workers)?;
    let expected = expected.copied().unwrap_or(config.thermo);
    let probs: Vec<f64> = config
        .well_depth_profile
        .values()
        .iter()
        .map(|&i| trapping_probability(expected.beta_e0() * i))
        .collect();
    let p_peak = probs.iter().copied().fold(0.0, f64::max);

    let per_bin_z: Vec<f64> = hist
        .trapped_counts
        .iter()
        .zip(&probs)
        .map(|(&c, &p)| binomial_z(c, config.n_particles, p))
        .collect();
    let max_z_score = per_bin_z.iter().fold(0.0, |m: f64, z| m.max(z.abs()));

    let bins = (0..probs.len())
        .map(|j| OracleBin {
            bin_center_y: hist.positions_y[j],
            bin_center_theta: hist.thetas[j],
            trapped_count: hist.trapped_counts[j],
            normalized_value: hist.normalized[j],
            expected_value: if p_peak > 0.0 { probs[j] / p_peak } else { 0.0 },
            z_score: per_bin_z[j],
        })
        .collect();

    Ok(OracleReport {
        max_z_score,
        pass: max_z_score < Z_THRESHOLD,
        per_bin_z,
        n_particles: config.n_particles,
        seed: config.seed,
        simulated_beta_e0: config.thermo.beta_e0(),
        expected_beta_e0: expected.beta_e0(),
        bins,
    })
}
