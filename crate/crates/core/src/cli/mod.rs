//! Batch front-end: configuration, command dispatch and artifact output.

mod config;
mod output;

use clap::ValueEnum;
use serde::Serialize;

pub use config::{
    CorrelationConfig, DimensionConfig, DiskSpec, GapConfig, GeodesicsConfig, LnicConfig, MatrixSpec, NcpConfig, ObservableSpec,
    PairingSpec, PressureConfig, RunConfig, SchemeSpec, StabilityConfig,
};
pub use output::{format_float, sha256_hex, write_atomic, Artifact, Field, OutputDir};

use crate::coding::{closed_geodesics, limit_points, ncp_spread, SchottkyScheme};
use crate::correlation::{fit_decay, holonomy_equidistribution, laplace_series, upsilon_series, TimeGrid};
use crate::error::{Error, Result};
use crate::geometry::Complex;
use crate::spectral::{gap_sweep, lnic_probe, omega_grid, small_a_stability, SweepGrid};
use crate::transfer::{dimension, pressure_curve, TransferModel};

/// Layout version of the written artifacts.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Dimension,
    PressureCurve,
    GapSweep,
    Stability,
    Lnic,
    Ncp,
    Correlation,
    Geodesics,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Dimension => "dimension",
            Command::PressureCurve => "pressure-curve",
            Command::GapSweep => "gap-sweep",
            Command::Stability => "stability",
            Command::Lnic => "lnic",
            Command::Ncp => "ncp",
            Command::Correlation => "correlation",
            Command::Geodesics => "geodesics",
        }
    }
}

#[derive(Serialize)]
struct Versions {
    crate_version: &'static str,
    format: u32,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: Command,
    config_hash: String,
    seed: u64,
    depth: usize,
    versions: Versions,
    exit_code: i32,
    artifacts: &'a [Artifact],
}

/// Outcome of a successful dispatch. `exit_code` is 2 when the scheme was
/// read but failed validation.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub exit_code: i32,
    pub artifacts: Vec<Artifact>,
}

/// Runs one command and writes its artifacts plus `manifest.json` under
/// `config.out`.
pub fn run(command: Command, config: &RunConfig) -> Result<RunSummary> {
    config.check()?;
    let mut out = OutputDir::create(&config.out)?;
    let scheme = config.build_scheme()?;
    let exit_code = match command {
        Command::Validate => run_validate(&scheme, &mut out)?,
        Command::Dimension => run_dimension(scheme, config, &mut out)?,
        Command::PressureCurve => run_pressure(scheme, config, &mut out)?,
        Command::GapSweep => run_gap(scheme, config, &mut out)?,
        Command::Stability => run_stability(scheme, config, &mut out)?,
        Command::Lnic => run_lnic(scheme, config, &mut out)?,
        Command::Ncp => run_ncp(scheme, config, &mut out)?,
        Command::Correlation => run_correlation(scheme, config, &mut out)?,
        Command::Geodesics => run_geodesics(scheme, config, &mut out)?,
    };
    let artifacts = out.artifacts().to_vec();
    let manifest = Manifest {
        command,
        config_hash: config.hash(),
        seed: config.seed,
        depth: config.depth,
        versions: Versions { crate_version: env!("CARGO_PKG_VERSION"), format: FORMAT_VERSION },
        exit_code,
        artifacts: &artifacts,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    write_atomic(&out.root().join("manifest.json"), &bytes)?;
    Ok(RunSummary { exit_code, artifacts })
}

fn model(scheme: SchottkyScheme, config: &RunConfig) -> Result<TransferModel> {
    TransferModel::with_capacity(scheme, config.depth, config.capacity)
}

fn run_validate(scheme: &SchottkyScheme, out: &mut OutputDir) -> Result<i32> {
    let report = scheme.validate();
    out.write_json("validation.json", &report)?;
    for failure in &report.failures {
        eprintln!("validation: {failure}");
    }
    Ok(if report.passed() { 0 } else { 2 })
}

#[derive(Serialize)]
struct DimensionReport {
    depth: usize,
    cylinders: usize,
    tolerance: f64,
    delta: f64,
    lambda: f64,
    residual_right: f64,
    residual_left: f64,
    duality_gap: f64,
    iterations: usize,
}

fn run_dimension(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let model = model(scheme, config)?;
    let delta = dimension(model.table(), config.dimension.tolerance)?;
    let rpf = model.weights().rpf0();
    out.write_json(
        "dimension.json",
        &DimensionReport {
            depth: model.depth(),
            cylinders: model.size(),
            tolerance: config.dimension.tolerance,
            delta,
            lambda: rpf.lambda,
            residual_right: rpf.residual_right,
            residual_left: rpf.residual_left,
            duality_gap: rpf.duality_gap,
            iterations: rpf.iterations,
        },
    )?;
    let table = model.table();
    let rows = (0..model.size())
        .map(|i| vec![table.word(i).to_string().into(), rpf.h[i].into(), rpf.nu[i].into()])
        .collect();
    out.write_csv("eigendata.csv", &["cylinder_word", "h", "nu"], rows)?;
    Ok(0)
}

fn run_pressure(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let model = model(scheme, config)?;
    let p = &config.pressure;
    let grid: Vec<f64> = (0..p.points)
        .map(|i| p.s_min + (p.s_max - p.s_min) * i as f64 / (p.points - 1) as f64)
        .collect();
    let curve = pressure_curve(model.table(), &grid)?;
    out.write_csv("pressure.csv", &["s", "pressure"], curve.into_iter().map(|(s, v)| vec![s.into(), v.into()]).collect())?;
    Ok(0)
}

fn run_gap(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let model = model(scheme, config)?;
    let g = &config.gap;
    let grid = SweepGrid::new(g.b.clone(), g.k.clone(), g.iterations, config.seed)?;
    let report = gap_sweep(&model, &grid, g.threshold)?;
    let rows = report
        .points
        .iter()
        .map(|p| vec![p.b.into(), p.k.into(), p.eta.into(), p.fit_residual.into(), p.flagged.into()])
        .collect();
    out.write_csv("gap.csv", &["b", "k", "eta", "fit_residual", "flag"], rows)?;
    out.write_json("gap.json", &report)?;
    Ok(0)
}

fn run_stability(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let model = model(scheme, config)?;
    let s = &config.stability;
    let rows = small_a_stability(&model, &s.a, s.b, s.k, s.iterations, config.seed)?;
    let records = rows
        .iter()
        .map(|r| vec![r.a.into(), r.eta.into(), r.fit_residual.into(), r.relative_deviation.into()])
        .collect();
    out.write_csv("stability.csv", &["a", "eta", "fit_residual", "relative_deviation"], records)?;
    Ok(0)
}

fn run_lnic(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let scheme = scheme.validated()?;
    let l = &config.lnic;
    let report = lnic_probe(&scheme, l.word_length, l.samples, &omega_grid(l.angles), config.seed)?;
    let rows = report.per_direction.iter().map(|&(w, v)| vec![w.into(), v.into()]).collect();
    out.write_csv("lnic.csv", &["omega", "value"], rows)?;
    out.write_json("lnic.json", &report)?;
    Ok(0)
}

#[derive(Serialize)]
struct NcpReport {
    points: usize,
    word_length: usize,
    bases: usize,
    directions: usize,
    radii: Vec<f64>,
    floor: f64,
}

fn run_ncp(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let scheme = scheme.validated()?;
    let n = &config.ncp;
    let points = limit_points(&scheme, n.points, n.word_length, config.seed)?;
    let bases = &points[..n.bases.min(points.len())];
    let mut rows = Vec::new();
    let mut floor = f64::INFINITY;
    for (i, &x) in bases.iter().enumerate() {
        for angle in omega_grid(n.directions) {
            for &eps in &n.radii {
                let spread = ncp_spread(&points, x, Complex::from_polar(1.0, angle), eps)?;
                floor = floor.min(spread);
                rows.push(vec![i.into(), x.re.into(), x.im.into(), angle.into(), eps.into(), spread.into()]);
            }
        }
    }
    out.write_csv("ncp.csv", &["base", "x_re", "x_im", "direction", "epsilon", "spread"], rows)?;
    out.write_json(
        "ncp.json",
        &NcpReport {
            points: points.len(),
            word_length: n.word_length,
            bases: bases.len(),
            directions: n.directions,
            radii: n.radii.clone(),
            floor,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct CorrelationReport {
    depth: usize,
    t_max: f64,
    step: f64,
    stride: usize,
    xi: f64,
    series: f64,
    series_tail: f64,
    transformed: f64,
    relative_difference: f64,
    decay_eta: f64,
    decay_amplitude: f64,
    decay_fit_residual: f64,
    decay_points: usize,
}

fn run_correlation(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let model = model(scheme, config)?;
    let c = &config.correlation;
    let alphabet = model.table().alphabet_size();
    let phi = c.phi.build(alphabet)?;
    let psi = c.psi.build(alphabet)?;
    let grid = TimeGrid { step: c.step, stride: c.stride };
    let series = upsilon_series(&model, &phi, &psi, c.t_max, grid)?;
    let rows = (0..series.t.len())
        .map(|i| vec![series.t[i].into(), series.upsilon[i].into(), series.upsilon0[i].into(), series.upsilon1[i].into()])
        .collect();
    out.write_csv("correlation.csv", &["t", "upsilon", "upsilon0", "upsilon1"], rows)?;

    let xi = Complex::new(c.xi, 0.0);
    let laplace = laplace_series(&model, &phi, &psi, xi, c.terms)?;
    let transformed = series.laplace_transform(xi).re;
    let decay = fit_decay(&series)?;
    out.write_json(
        "correlation.json",
        &CorrelationReport {
            depth: model.depth(),
            t_max: c.t_max,
            step: c.step,
            stride: c.stride,
            xi: c.xi,
            series: laplace.value.re,
            series_tail: laplace.tail_estimate,
            transformed,
            relative_difference: (laplace.value.re - transformed).abs() / laplace.value.re.abs(),
            decay_eta: decay.eta,
            decay_amplitude: decay.amplitude,
            decay_fit_residual: decay.fit_residual,
            decay_points: decay.points,
        },
    )?;
    Ok(0)
}

fn run_geodesics(scheme: SchottkyScheme, config: &RunConfig, out: &mut OutputDir) -> Result<i32> {
    let model = model(scheme, config)?;
    let g = &config.geodesics;
    let t_max = g.t_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let geodesics = closed_geodesics(model.scheme(), t_max, g.capacity)?;
    let rows = geodesics
        .iter()
        .map(|c| vec![c.class_id.into(), c.length.into(), c.angle.into(), c.word.clone().into()])
        .collect();
    out.write_csv("geodesics.csv", &["class_id", "length", "angle", "word"], rows)?;
    let stats = holonomy_equidistribution(model.scheme(), &g.t_values, model.delta(), g.capacity)?;
    let rows = stats
        .iter()
        .map(|r| vec![r.t.into(), r.count.into(), r.s[0].into(), r.s[1].into(), r.s[2].into(), r.li_ratio.into()])
        .collect();
    out.write_csv("equidistribution.csv", &["T", "count", "S1", "S2", "S3", "li_ratio"], rows)?;
    Ok(0)
}

/// Maps a failed run to its exit code and prints the diagnostic.
pub fn report_error(err: &Error) -> i32 {
    eprintln!("error: {err}");
    err.exit_code()
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;

    fn config(dir: &Path, fixture: &str) -> RunConfig {
        let mut config = RunConfig::default();
        config.scheme.fixture = Some(fixture.into());
        config.out = dir.to_path_buf();
        config.depth = 4;
        config
    }

    #[test]
    fn validate_writes_report_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let summary = run(Command::Validate, &config(dir.path(), "a")).unwrap();
        assert_eq!(summary.exit_code, 0);
        assert!(dir.path().join("validation.json").exists());
        let manifest: serde_json::Value =
            serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["command"], "validate");
        assert_eq!(manifest["artifacts"][0]["name"], "validation.json");
    }

    #[test]
    fn overlapping_disks_fail_validation() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = config(dir.path(), "a");
        config.scheme.fixture = None;
        config.scheme.pairings = vec![
            PairingSpec { source: [-3.0, 0.0], target: [3.0, 0.0], radius: 0.6 },
            PairingSpec { source: [-2.8, 0.0], target: [1.0, 0.0], radius: 0.35 },
        ];
        assert_eq!(run(Command::Validate, &config).unwrap().exit_code, 2);
        let err = run(Command::Dimension, &config).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn pressure_curve_is_decreasing() {
        let dir = tempfile::tempdir().unwrap();
        run(Command::PressureCurve, &config(dir.path(), "b")).unwrap();
        let mut reader = csv::Reader::from_path(dir.path().join("pressure.csv")).unwrap();
        let values: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
        assert_eq!(values.len(), 21);
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }
}
