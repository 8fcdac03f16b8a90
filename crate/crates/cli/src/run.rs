//! Scenario execution.

use std::fs;
use std::path::Path;

use slitwave::diffraction::{quadrature_node_count_with, wavefunction_at, WaveField};
use slitwave::model::{Grid1D, SlitKind, Snapshot};
use slitwave::phase_space::{
    de_broglie_density_on, marginal_k, marginal_x, negativity_metrics, wigner_function, wigner_function_on,
    zero_set_consistency, PhaseSpaceMap,
};
use slitwave::spectral::{fraunhofer_density, momentum_spectrum, relative_l2, SpectralField};

use crate::config::{Output, ScenarioConfig, SnapshotSpec};
use crate::emit::{emit_density_csv, emit_phase_space_csv, emit_spectrum_csv, format_value};
use crate::error::CliError;
use crate::manifest::RunManifest;

/// Normalized fields must integrate to one within this.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// Closed-form comparisons must stay within these.
pub const FRAUNHOFER_TOL: f64 = 1e-2;
pub const GAUSSIAN_TOL: f64 = 1e-6;

struct Audit<'a> {
    entries: Vec<(String, String)>,
    precision: usize,
    prefix: &'a str,
}

impl Audit<'_> {
    fn number(&mut self, key: &str, value: f64) {
        self.entries.push((format!("{}.{key}", self.prefix), format_value(value, self.precision)));
    }

    fn text(&mut self, key: &str, value: impl ToString) {
        self.entries.push((format!("{}.{key}", self.prefix), value.to_string()));
    }
}

/// Runs every requested output for every slit kind and snapshot.
///
/// Numerical-integrity failures in one snapshot are recorded in the
/// manifest and the run carries on with the next; I/O failures abort.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunManifest, CliError> {
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}", dir.display()), e))?;
    let mut manifest = RunManifest {
        scenario: config.name.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.resolved().clone(),
        reconstructed: config.reconstructed.clone(),
        ..Default::default()
    };

    for &kind in &config.kinds {
        if config.wants(Output::Fraunhofer) && !config.wants(Output::Spectrum) {
            let density = fraunhofer_density(&config.aperture(kind), &config.kgrid);
            let path = dir.join(format!("fraunhofer_{}.csv", kind.name()));
            manifest.files.push(emit_density_csv(&config.kgrid, &density, &path, &config.format)?);
        }
        for snap in &config.snapshots {
            let prefix = format!("{}.{}", kind.name(), snap.label);
            let mut audit = Audit { entries: Vec::new(), precision: config.format.precision, prefix: &prefix };
            let result = run_snapshot(config, kind, snap, dir, &mut audit, &mut manifest);
            if config.wants(Output::Reports) {
                let path = dir.join(format!("report_{}_{}.txt", kind.name(), snap.label));
                write_report(&path, &audit.entries)?;
            }
            manifest.audit.append(&mut audit.entries);
            match result {
                Ok(failed) => manifest.failed.extend(failed),
                Err(CliError::Numerical(msg)) => manifest.failed.push(format!("{prefix}: {msg}")),
                Err(e) => return Err(e),
            }
        }
    }
    manifest.write(dir)?;
    Ok(manifest)
}

fn write_report(path: &Path, entries: &[(String, String)]) -> Result<(), CliError> {
    let text: String = entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    fs::write(path, text).map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))
}

fn run_snapshot(
    config: &ScenarioConfig,
    kind: SlitKind,
    snap: &SnapshotSpec,
    dir: &Path,
    audit: &mut Audit,
    manifest: &mut RunManifest,
) -> Result<Vec<String>, CliError> {
    let mut failed = Vec::new();
    let spec = config.aperture(kind);
    let snapshot = snap.resolve(&config.beam)?;
    let stem = format!("{}_{}", kind.name(), snap.label);
    audit.number("y_m", snapshot.y());
    audit.number("t_s", snapshot.t());

    let psi = wavefunction_at(&spec, &config.beam, snapshot, &config.xgrid, &config.quadrature)?;
    let probability = psi.probability();
    audit.number("probability", probability);
    if !snapshot.is_slit_plane() {
        audit.number("norm_raw", psi.norm_raw());
        let nodes =
            quadrature_node_count_with(&config.quadrature, &config.beam, snapshot.y(), &spec, config.xgrid.extent())?;
        audit.text("quadrature_nodes_per_slit", nodes);
    }
    let normalized = if snapshot.is_slit_plane() {
        probability > 0.0 && probability.is_finite()
    } else {
        (probability - 1.0).abs() <= NORMALIZATION_TOL
    };
    if !normalized {
        failed.push(format!("{}.normalization", audit.prefix));
        return Ok(failed);
    }

    if config.wants(Output::Intensity) {
        let path = dir.join(format!("intensity_{stem}.csv"));
        manifest.files.push(emit_density_csv(&config.xgrid, &psi.intensity(), &path, &config.format)?);
    }

    let needs_spectrum = config.wants(Output::Spectrum) || config.wants(Output::Reports);
    if needs_spectrum {
        let spectrum = momentum_spectrum(&psi, &config.kgrid)?;
        let density = spectrum.density();
        let oracle = fraunhofer_density(&spec, &config.kgrid);
        audit.number("spectral_probability", spectrum.probability());
        audit.number("fraunhofer_deviation", relative_l2(&oracle, &density));
        if config.wants(Output::Spectrum) {
            let path = dir.join(format!("spectrum_{stem}.csv"));
            let file = if config.wants(Output::Fraunhofer) {
                emit_spectrum_csv(&config.kgrid, &density, &oracle, &path, &config.format)?
            } else {
                emit_density_csv(&config.kgrid, &density, &path, &config.format)?
            };
            manifest.files.push(file);
        }
    }

    let reports = config.wants(Output::Reports);
    if config.wants(Output::DeBroglie) || reports {
        let spectrum = momentum_spectrum(&psi, &config.map_k)?;
        let map = de_broglie_density_on(&psi, &spectrum, &config.map_x)?;
        audit_map(audit, "debroglie", &psi, &spectrum, &map);
        if config.wants(Output::DeBroglie) {
            let path = dir.join(format!("debroglie_{stem}.csv"));
            manifest.files.push(emit_phase_space_csv(&map, &path, &config.format)?);
        }
    }
    if config.wants(Output::Wigner) || reports {
        let spectrum = momentum_spectrum(&psi, &config.map_k)?;
        let map = wigner_function_on(&psi, &config.map_x, &config.map_k)?;
        audit_map(audit, "wigner", &psi, &spectrum, &map);
        if config.wants(Output::Wigner) {
            let path = dir.join(format!("wigner_{stem}.csv"));
            manifest.files.push(emit_phase_space_csv(&map, &path, &config.format)?);
        }
    }
    Ok(failed)
}

fn audit_map(audit: &mut Audit, name: &str, psi: &WaveField, spectrum: &SpectralField, map: &PhaseSpaceMap) {
    let rho: Vec<f64> = map.xgrid().points().map(|x| psi.values()[psi.grid().nearest_index(x)].norm_sqr()).collect();
    audit.number(&format!("{name}.marginal_x_error"), relative_l2(&rho, &marginal_x(map)));
    audit.number(&format!("{name}.marginal_k_error"), relative_l2(&spectrum.density(), &marginal_k(map)));
    audit.number(&format!("{name}.imaginary_residue"), map.imaginary_residue());
    let neg = negativity_metrics(map);
    audit.number(&format!("{name}.min_value"), neg.min_value);
    audit.number(&format!("{name}.negative_volume"), neg.negative_volume);
    audit.number(&format!("{name}.absolute_volume"), neg.absolute_volume);
    audit.number(&format!("{name}.negative_fraction"), neg.negative_fraction);
    let zeros = zero_set_consistency(psi, spectrum, map);
    audit.text(&format!("{name}.zero_consistent"), zeros.consistent);
    audit.text(&format!("{name}.zero_lines_x"), zeros.position_lines.len());
    audit.text(&format!("{name}.zero_lines_k"), zeros.momentum_lines.len());
    audit.number(&format!("{name}.zero_line_worst_ratio"), zeros.worst_ratio());
}

/// One closed-form comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl OracleResult {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

/// Closed-form checks only: every spectrum against its Fraunhofer
/// transform, and the grid Wigner function of a Gaussian of width δ
/// against its closed form.
pub fn run_oracles(config: &ScenarioConfig) -> Result<Vec<OracleResult>, CliError> {
    let mut results = Vec::new();
    for &kind in &config.kinds {
        let spec = config.aperture(kind);
        let oracle = fraunhofer_density(&spec, &config.kgrid);
        for snap in &config.snapshots {
            let snapshot = snap.resolve(&config.beam)?;
            let psi = wavefunction_at(&spec, &config.beam, snapshot, &config.xgrid, &config.quadrature)?;
            let spectrum = momentum_spectrum(&psi, &config.kgrid)?;
            results.push(OracleResult {
                name: format!("fraunhofer.{}.{}", kind.name(), snap.label),
                deviation: relative_l2(&oracle, &spectrum.density()),
                tolerance: FRAUNHOFER_TOL,
            });
        }
    }
    results.push(OracleResult {
        name: "gaussian_wigner".into(),
        deviation: gaussian_wigner_deviation(config.delta)?,
        tolerance: GAUSSIAN_TOL,
    });
    Ok(results)
}

/// Relative L² distance between the grid Wigner function of a Gaussian of
/// width `sigma` and `(1/π) exp(-x²/σ² - σ²k²)`.
pub fn gaussian_wigner_deviation(sigma: f64) -> Result<f64, CliError> {
    use num_complex::Complex64;
    use std::f64::consts::PI;

    let grid = Grid1D::new(-8.0 * sigma, 8.0 * sigma, 641)?;
    let norm = (PI * sigma * sigma).powf(-0.25);
    let values = grid.points().map(|x| Complex64::new(norm * (-x * x / (2.0 * sigma * sigma)).exp(), 0.0)).collect();
    let psi = WaveField::new(grid, values, Snapshot::SLIT_PLANE)?;
    let kgrid = Grid1D::new(-6.0 / sigma, 6.0 / sigma, 241)?;
    let map = wigner_function(&psi, &kgrid)?;
    let mut exact = Vec::with_capacity(grid.len() * kgrid.len());
    for x in grid.points() {
        for k in kgrid.points() {
            exact.push((-x * x / (sigma * sigma) - sigma * sigma * k * k).exp() / PI);
        }
    }
    Ok(relative_l2(&exact, &map.to_dense()))
}
