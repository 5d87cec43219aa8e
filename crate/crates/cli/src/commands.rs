use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use pilotwave_core::{
    chi2_objective, coherence_length, coherence_width, distinguishability_report,
    generate_pattern, oracle_report, predict_blocked_slit, BeamThermo, CoherenceInputs,
    EnsembleConfig, ExperimentGeometry, FitConfig, GridSpec, Weighting, constants::LIGHT_YEAR,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    CoherenceArgs, FitArgs, Format, OracleArgs, OutputArgs, PhysicsArgs, SimulateArgs,
    WeightingArg,
};
use crate::svg::{LinePlot, Series};
use crate::table::{fmt_num, Table};

pub const OUT_ENV: &str = "PILOTWAVE_OUT";

const RADIATION_COLOR: &str = "#1f77b4";
const SED_COLOR: &str = "#d62728";
const CHI2_COLOR: &str = "#2ca02c";

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    OracleFailed,
}

/// Physics parameters after defaults are applied; echoed into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedPhysics {
    pub n_slits: u32,
    pub slit_width_m: f64,
    pub slit_separation_m: Option<f64>,
    pub screen_distance_m: f64,
    pub geometry_factor: f64,
    pub beta_e0: f64,
    pub pilot_wavelength_m: f64,
    pub k_pilot_per_m: f64,
    pub grid_points: usize,
    pub theta_range: f64,
}

impl ResolvedPhysics {
    fn resolve(args: &PhysicsArgs, default_slits: u32, default_points: usize, default_range: f64) -> Self {
        let n_slits = args.n_slits.unwrap_or(default_slits);
        let slit_separation_m = if n_slits > 1 {
            Some(args.slit_separation.unwrap_or(4.0 * args.slit_width))
        } else {
            args.slit_separation
        };
        Self {
            n_slits,
            slit_width_m: args.slit_width,
            slit_separation_m,
            screen_distance_m: args.screen_distance,
            geometry_factor: args.geometry_factor,
            beta_e0: args.beta_e0,
            pilot_wavelength_m: args.pilot_wavelength,
            k_pilot_per_m: 2.0 * PI / args.pilot_wavelength,
            grid_points: args.grid_points.unwrap_or(default_points),
            theta_range: args.theta_range.unwrap_or(default_range),
        }
    }

    fn geometry(&self) -> Result<ExperimentGeometry> {
        if !(self.pilot_wavelength_m.is_finite() && self.pilot_wavelength_m > 0.0) {
            anyhow::bail!(pilotwave_core::Error::InvalidGeometry(format!(
                "pilot wavelength must be positive, got {}",
                self.pilot_wavelength_m
            )));
        }
        Ok(ExperimentGeometry {
            n_slits: self.n_slits,
            slit_width: self.slit_width_m,
            slit_separation: self.slit_separation_m,
            screen_distance: self.screen_distance_m,
            geometry_factor: self.geometry_factor,
        }
        .validated()?)
    }

    fn thermo(&self) -> Result<BeamThermo> {
        let thermo = BeamThermo::new(self.beta_e0)?;
        if let Some(w) = thermo.warning() {
            eprintln!("warning: {w}");
        }
        Ok(thermo)
    }

    fn grid(&self) -> GridSpec {
        GridSpec::theta_span(self.theta_range, self.grid_points)
    }
}

struct Output {
    dir: PathBuf,
    formats: Vec<Format>,
    written: Vec<String>,
}

impl Output {
    fn new(args: &OutputArgs) -> Result<Self> {
        let dir = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| args.out.clone());
        fs::create_dir_all(&dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self { dir, formats: args.format.clone(), written: Vec::new() })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, &s)
    }

    /// Manifest with the fully resolved configuration and the file list.
    fn finish(mut self, subcommand: &str, config: serde_json::Value) -> Result<PathBuf> {
        self.written.push("manifest.json".to_string());
        let manifest = json!({
            "tool": "pilotwave",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": subcommand,
            "config": config,
            "outputs": self.written,
        });
        let mut s = serde_json::to_string_pretty(&manifest)?;
        s.push('\n');
        fs::write(self.dir.join("manifest.json"), s)
            .with_context(|| format!("cannot write manifest in {}", self.dir.display()))?;
        Ok(self.dir)
    }
}

fn dir_display(p: &Path) -> String {
    p.display().to_string()
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome> {
    let physics = ResolvedPhysics::resolve(&args.physics, 1, 2001, 3.0 * PI);
    let geom = physics.geometry()?;
    let thermo = physics.thermo()?;
    let pair = generate_pattern(&geom, &thermo, physics.k_pilot_per_m, &physics.grid())?;
    let mut out = Output::new(&args.physics.output)?;

    if out.wants(Format::Csv) {
        let mut t = Table::new(&["y_m", "theta", "radiation", "sed"]);
        for i in 0..pair.radiation.len() {
            t.push(vec![
                fmt_num(pair.radiation.positions_y()[i]),
                fmt_num(pair.radiation.thetas()[i]),
                fmt_num(pair.radiation.values()[i]),
                fmt_num(pair.sed.values()[i]),
            ]);
        }
        out.write("pattern.csv", &t.to_csv())?;
    }

    if out.wants(Format::Svg) {
        let thetas = pair.radiation.thetas();
        let chi2_scaled = if args.with_chi2 {
            let config = FitConfig { theta_range: physics.theta_range, ..FitConfig::default() };
            let chi2 = chi2_objective(&pair.sed, 1.0, &geom, physics.k_pilot_per_m, &config)?;
            let max = chi2.chi2_per_bin.iter().map(|b| b.chi2).fold(0.0, f64::max);
            let xs: Vec<f64> = chi2.chi2_per_bin.iter().map(|b| b.theta).collect();
            let ys: Vec<f64> = chi2
                .chi2_per_bin
                .iter()
                .map(|b| if max > 0.0 { b.chi2 / max } else { 0.0 })
                .collect();
            Some((xs, ys))
        } else {
            None
        };
        let mut series = vec![
            Series { label: "radiation", color: RADIATION_COLOR, dashed: false, xs: thetas, ys: pair.radiation.values() },
            Series { label: "particle beam", color: SED_COLOR, dashed: true, xs: thetas, ys: pair.sed.values() },
        ];
        if let Some((xs, ys)) = &chi2_scaled {
            series.push(Series { label: "chi2 per bin (scaled)", color: CHI2_COLOR, dashed: false, xs, ys });
        }
        let title = format!("{}-slit pattern, beta_E0 = {}", physics.n_slits, physics.beta_e0);
        let plot = LinePlot { title: &title, x_label: "theta", y_label: "peak-normalized value", series };
        out.write("pattern.svg", &plot.render())?;
    }

    let dir = out.finish("simulate", json!({ "physics": physics, "with_chi2": args.with_chi2 }))?;
    eprintln!("wrote simulate outputs to {}", dir_display(&dir));
    Ok(Outcome::Success)
}

pub fn fit(args: &FitArgs) -> Result<Outcome> {
    let physics = ResolvedPhysics::resolve(&args.physics, 1, 201, 2.0 * PI);
    let geom = physics.geometry()?;
    let thermo = physics.thermo()?;
    let config = FitConfig {
        width_scale_bounds: args.bounds,
        tolerance: args.tol,
        weighting: match args.weighting {
            WeightingArg::Uniform => Weighting::Uniform,
            WeightingArg::Poisson => Weighting::Poisson { total_counts: args.total_counts },
        },
        bins: physics.grid_points,
        theta_range: physics.theta_range,
    };
    config.validate()?;
    let k = physics.k_pilot_per_m;
    let report = distinguishability_report(&geom, &thermo, k, &config)?;
    let data = generate_pattern(&geom, &thermo, k, &config.grid())?.sed;

    // Window samples in data order: map each residual back to its data value.
    let window: Vec<(f64, f64, f64, f64)> = report
        .residual_curve
        .positions_y
        .iter()
        .zip(&report.residual_curve.thetas)
        .zip(&report.residual_curve.residuals)
        .map(|((&y, &theta), &r)| {
            let i = data.positions_y().iter().position(|&p| p == y).expect("window sample on data grid");
            let d = data.values()[i];
            (y, theta, d, d + r)
        })
        .collect();

    let mut out = Output::new(&args.physics.output)?;
    if out.wants(Format::Json) {
        out.write_json("fit_report.json", &report.fit)?;
    }
    if out.wants(Format::Csv) {
        let mut t = Table::new(&["y_m", "theta", "data", "model", "residual", "chi2"]);
        for ((y, theta, d, m), bin) in window.iter().zip(&report.fit.chi2_per_bin) {
            t.push(vec![fmt_num(*y), fmt_num(*theta), fmt_num(*d), fmt_num(*m), fmt_num(m - d), fmt_num(bin.chi2)]);
        }
        out.write("chi2_bins.csv", &t.to_csv())?;
    }
    if out.wants(Format::Svg) {
        let thetas: Vec<f64> = window.iter().map(|w| w.1).collect();
        let data_v: Vec<f64> = window.iter().map(|w| w.2).collect();
        let model_v: Vec<f64> = window.iter().map(|w| w.3).collect();
        let max = report.fit.chi2_per_bin.iter().map(|b| b.chi2).fold(0.0, f64::max);
        let chi2_v: Vec<f64> = report
            .fit
            .chi2_per_bin
            .iter()
            .map(|b| if max > 0.0 { b.chi2 / max } else { 0.0 })
            .collect();
        let title = format!("width fit: {:.3}% narrower slit", report.fit.width_reduction_percent);
        let plot = LinePlot {
            title: &title,
            x_label: "theta",
            y_label: "peak-normalized value",
            series: vec![
                Series { label: "particle data", color: SED_COLOR, dashed: false, xs: &thetas, ys: &data_v },
                Series { label: "fitted radiation", color: RADIATION_COLOR, dashed: true, xs: &thetas, ys: &model_v },
                Series { label: "chi2 per bin (scaled)", color: CHI2_COLOR, dashed: false, xs: &thetas, ys: &chi2_v },
            ],
        };
        out.write("fit.svg", &plot.render())?;
    }

    println!(
        "width_scale = {}  width_reduction_percent = {:.4}  chi2 {} -> {}  max|residual| {:.6} -> {:.6}",
        report.fit.width_scale,
        report.fit.width_reduction_percent,
        fmt_num(report.chi2_unscaled),
        fmt_num(report.fit.chi2_total),
        report.max_abs_residual_unscaled,
        report.max_abs_residual_at_fit,
    );
    out.finish("fit", json!({ "physics": physics, "fit": config }))?;
    Ok(Outcome::Success)
}

pub fn oracle(args: &OracleArgs) -> Result<Outcome> {
    let mut physics = ResolvedPhysics::resolve(&args.physics, 1, args.bins, 3.0 * PI);
    physics.grid_points = args.bins;
    let geom = physics.geometry()?;
    let thermo = physics.thermo()?;
    let expected = args.expect_beta_e0.map(BeamThermo::new).transpose()?;
    let config = EnsembleConfig::from_geometry(
        &geom,
        thermo,
        physics.k_pilot_per_m,
        &physics.grid(),
        args.n_particles,
        args.seed,
    )?;
    let report = oracle_report(&config, expected.as_ref(), args.workers)?;

    let mut out = Output::new(&args.physics.output)?;
    if out.wants(Format::Csv) {
        let mut t = Table::new(&[
            "bin_center_y",
            "bin_center_theta",
            "trapped_count",
            "normalized_value",
            "expected_value",
            "z_score",
        ]);
        for b in &report.bins {
            t.push(vec![
                fmt_num(b.bin_center_y),
                fmt_num(b.bin_center_theta),
                b.trapped_count.to_string(),
                fmt_num(b.normalized_value),
                fmt_num(b.expected_value),
                fmt_num(b.z_score),
            ]);
        }
        out.write("oracle.csv", &t.to_csv())?;
    }
    if out.wants(Format::Json) {
        out.write_json("oracle_report.json", &report)?;
    }
    println!(
        "max |z| = {:.3} over {} bins: {}",
        report.max_z_score,
        report.per_bin_z.len(),
        if report.pass { "pass" } else { "FAIL" }
    );
    out.finish(
        "oracle",
        json!({
            "physics": physics,
            "n_particles": args.n_particles,
            "seed": args.seed,
            "bins": args.bins,
            "expect_beta_e0": report.expected_beta_e0,
        }),
    )?;
    Ok(if report.pass { Outcome::Success } else { Outcome::OracleFailed })
}

pub fn coherence(args: &CoherenceArgs) -> Result<Outcome> {
    let distance = args.source_distance.unwrap_or(args.source_distance_ly * LIGHT_YEAR);
    let inputs = CoherenceInputs {
        speed_of_light_m_per_s: args.speed_of_light,
        ..CoherenceInputs::new(args.bandwidth, distance, args.wavelength, args.source_area)?
    };
    let length = coherence_length(&inputs)?;
    let width = coherence_width(&inputs)?;
    let result = json!({
        "bandwidth_hz": inputs.bandwidth_hz,
        "source_distance_m": inputs.source_distance_m,
        "wavelength_m": inputs.wavelength_m,
        "source_area_m2": inputs.source_area_m2,
        "speed_of_light_m_per_s": inputs.speed_of_light_m_per_s,
        "coherence_length_m": length,
        "coherence_area_m2": width.coherence_area_m2,
        "coherence_width_m": width.coherence_width_m,
    });
    println!("{}", serde_json::to_string_pretty(&result)?);
    let mut out = Output::new(&args.output)?;
    if out.wants(Format::Json) {
        out.write_json("coherence.json", &result)?;
    }
    out.finish("coherence", json!({ "inputs": inputs }))?;
    Ok(Outcome::Success)
}

pub fn predict_blocked(args: &PhysicsArgs) -> Result<Outcome> {
    let physics = ResolvedPhysics::resolve(args, 2, 2001, 3.0 * PI);
    let geom = physics.geometry()?;
    let thermo = physics.thermo()?;
    let p = predict_blocked_slit(&geom, &thermo, physics.k_pilot_per_m, &physics.grid())?;
    let mut out = Output::new(&args.output)?;
    let (sed, orth) = (&p.sed_prediction, &p.orthodox_prediction);
    if out.wants(Format::Csv) {
        let mut t = Table::new(&["y_m", "theta", "sed_prediction", "orthodox_prediction"]);
        for i in 0..sed.len() {
            t.push(vec![
                fmt_num(sed.positions_y()[i]),
                fmt_num(sed.thetas()[i]),
                fmt_num(sed.values()[i]),
                fmt_num(orth.values()[i]),
            ]);
        }
        out.write("blocked.csv", &t.to_csv())?;
    }
    if out.wants(Format::Svg) {
        let title = format!("one slit blocked, beta_E0 = {}", physics.beta_e0);
        let plot = LinePlot {
            title: &title,
            x_label: "theta",
            y_label: "intensity (two-slit peak = 1)",
            series: vec![
                Series { label: "pilot wave", color: SED_COLOR, dashed: false, xs: sed.thetas(), ys: sed.values() },
                Series { label: "orthodox", color: RADIATION_COLOR, dashed: true, xs: orth.thetas(), ys: orth.values() },
            ],
        };
        out.write("blocked.svg", &plot.render())?;
    }
    out.finish("predict-blocked", json!({ "physics": physics }))?;
    Ok(Outcome::Success)
}
