use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pilotwave", version, about = "Radiation vs particle-beam diffraction patterns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Paired radiation and particle-beam patterns on a shared grid.
    Simulate(SimulateArgs),
    /// Fit the radiation pattern to particle-beam data with slit width free.
    Fit(FitArgs),
    /// Monte-Carlo check of the trapping law; exit code 3 on failure.
    Oracle(OracleArgs),
    /// Coherence length and width estimates, printed as JSON.
    Coherence(CoherenceArgs),
    /// Double slit with one slit blocked: pilot-wave vs orthodox prediction.
    PredictBlocked(PhysicsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightingArg {
    Uniform,
    Poisson,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory; the PILOTWAVE_OUT environment variable takes precedence.
    #[arg(long, default_value = "pilotwave-out")]
    pub out: PathBuf,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json,svg")]
    pub format: Vec<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    /// Slit width, meters.
    #[arg(long, default_value_t = 2e-5)]
    pub slit_width: f64,
    /// Slit-to-screen distance, meters.
    #[arg(long, default_value_t = 5.0)]
    pub screen_distance: f64,
    /// Number of slits [default: 1, or 2 for predict-blocked].
    #[arg(long)]
    pub n_slits: Option<u32>,
    /// Center-to-center slit separation, meters [default: 4 x slit width].
    #[arg(long)]
    pub slit_separation: Option<f64>,
    /// Exponent coefficient of the trapping probability.
    #[arg(long, default_value_t = 0.5)]
    pub beta_e0: f64,
    /// Pilot-wave wavelength, meters; the wave number is 2π/λ.
    #[arg(long, default_value_t = 2e-9)]
    pub pilot_wavelength: f64,
    /// Multiplier on the y → θ map (0.25 gives the textbook Fraunhofer phase).
    #[arg(long, default_value_t = 1.0)]
    pub geometry_factor: f64,
    /// Grid points [default: 2001, or 201 fit bins for fit].
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Half-width of the θ window, radians; accepts forms like `3pi` [default: 3pi, or 2pi for fit].
    #[arg(long, value_parser = parse_angle)]
    pub theta_range: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Overlay the per-bin χ² contribution (true slit width) in the SVG.
    #[arg(long)]
    pub with_chi2: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_enum, default_value = "poisson")]
    pub weighting: WeightingArg,
    /// Total counts for Poisson weighting.
    #[arg(long, default_value_t = 1e6)]
    pub total_counts: f64,
    /// Width-scale search interval `lo,hi`.
    #[arg(long, value_parser = parse_bounds, default_value = "0.8,1.2")]
    pub bounds: (f64, f64),
    /// Convergence tolerance on the width scale.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub n_particles: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Number of position bins.
    #[arg(long, default_value_t = 201)]
    pub bins: usize,
    /// Coupling used for the closed-form expectation [default: --beta-e0].
    #[arg(long)]
    pub expect_beta_e0: Option<f64>,
    /// Worker threads [default: all cores]; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CoherenceArgs {
    /// Bandwidth Δν, Hz.
    #[arg(long, default_value_t = 2.998e8)]
    pub bandwidth: f64,
    /// Source distance, light years.
    #[arg(long, default_value_t = 1e9, conflicts_with = "source_distance")]
    pub source_distance_ly: f64,
    /// Source distance, meters (overrides --source-distance-ly).
    #[arg(long)]
    pub source_distance: Option<f64>,
    /// Wavelength, meters.
    #[arg(long, default_value_t = 5e-12)]
    pub wavelength: f64,
    /// Source area, m².
    #[arg(long, default_value_t = 1e-20)]
    pub source_area: f64,
    /// Speed of light used in c/Δν, m/s.
    #[arg(long, default_value_t = 2.998e8)]
    pub speed_of_light: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Radians, optionally as a multiple of π: `3.5`, `3pi`, `pi`, `0.5*pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let value = if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let k = if head.is_empty() {
            1.0
        } else {
            head.parse::<f64>().map_err(|e| format!("bad angle {s:?}: {e}"))?
        };
        k * PI
    } else {
        t.parse::<f64>().map_err(|e| format!("bad angle {s:?}: {e}"))?
    };
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(format!("angle must be positive, got {s:?}"))
    }
}

pub fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `lo,hi`, got {s:?}"))?;
    let lo = a.trim().parse::<f64>().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = b.trim().parse::<f64>().map_err(|e| format!("bad upper bound: {e}"))?;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("3pi").unwrap(), 3.0 * PI);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("0.5*pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("2.5").unwrap(), 2.5);
        assert!(parse_angle("-1").is_err());
        assert!(parse_angle("xpi").is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(parse_bounds("0.8, 1.2").unwrap(), (0.8, 1.2));
        assert!(parse_bounds("0.8").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
