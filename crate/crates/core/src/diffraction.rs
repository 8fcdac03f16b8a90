//! The Fresnel-Kirchhoff field behind the slit screen.
//!
//! For a point `(x, y)` behind the screen the field is
//!
//! ```text
//! Φ(x, y) ∝ ∫ dx′ φ(x′) e^{iks} (1 + cos χ) / s,   s = √(y² + (x′ - x)²),  cos χ = y/s
//! ```
//!
//! and the transverse wavefunction is `ψ(x, t) = Φ(x, vt)`. Constant
//! prefactors and the common phase `e^{iky}` are dropped; per-snapshot
//! normalization restores the scale.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{ApertureSpec, BeamParams, Grid1D, Slit, Snapshot};
use crate::quadrature::CompositeRule;

/// Transverse wavefunction samples at one snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid1D,
    values: Vec<Complex64>,
    snapshot: Snapshot,
    norm_raw: f64,
}

impl WaveField {
    /// Wraps samples; `norm_raw` is computed from them with the trapezoid rule.
    pub fn new(grid: Grid1D, values: Vec<Complex64>, snapshot: Snapshot) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {} points", values.len(), grid.len())));
        }
        let norm_raw = l2_norm(&grid, &values);
        Ok(Self { grid, values, snapshot, norm_raw })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn snapshot(&self) -> Snapshot {
        self.snapshot
    }

    /// L² norm over the window before normalization.
    pub fn norm_raw(&self) -> f64 {
        self.norm_raw
    }

    /// `|ψ(x)|²` at every grid point.
    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Trapezoid integral of `|ψ|²` over the window.
    pub fn probability(&self) -> f64 {
        self.grid.integrate(&self.intensity())
    }

    /// The same field multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let values = self.values.iter().map(|v| v * factor).collect();
        Self::new(self.grid, values, self.snapshot).expect("same grid")
    }
}

fn l2_norm(grid: &Grid1D, values: &[Complex64]) -> f64 {
    let intensity: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    grid.integrate(&intensity).sqrt()
}

/// One node of the slit-plane quadrature as seen from a field point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub xprime: f64,
    pub weight: f64,
    /// Distance from the node to the field point.
    pub s: f64,
    /// Obliquity `y/s`.
    pub cos_chi: f64,
}

impl QuadratureNode {
    pub fn new(xprime: f64, weight: f64, x: f64, y: f64) -> Self {
        let u = xprime - x;
        let s = y.hypot(u);
        Self { xprime, weight, s, cos_chi: y / s }
    }

    /// `e^{ik(s - y)} (1 + cos χ) / s`, with `s - y` taken in the
    /// cancellation-free form `u² / (s + y)`.
    pub fn kernel(&self, k: f64, x: f64, y: f64) -> Complex64 {
        let u = self.xprime - x;
        let phase = k * (u * u) / (self.s + y);
        let (sin, cos) = phase.sin_cos();
        Complex64::new(cos, sin) * ((1.0 + self.cos_chi) / self.s)
    }
}

/// Node-count rule for the oscillatory slit integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Nodes per 2π of kernel phase across one slit.
    pub oversample: f64,
    /// Floor on the node count per slit.
    pub min_nodes: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { oversample: 16.0, min_nodes: 64 }
    }
}

/// Kernel phase `k·(s_max - s_min)` accumulated across `slit` as seen from `x`.
pub fn phase_span(k: f64, y: f64, slit: &Slit, x: f64) -> f64 {
    let ua = slit.lo - x;
    let ub = slit.hi - x;
    let (u_near, u_far) = if slit.contains(x) {
        (0.0, ua.abs().max(ub.abs()))
    } else if ua.abs() < ub.abs() {
        (ua.abs(), ub.abs())
    } else {
        (ub.abs(), ua.abs())
    };
    let s_near = y.hypot(u_near);
    let s_far = y.hypot(u_far);
    k * (u_far - u_near) * (u_far + u_near) / (s_far + s_near)
}

/// Largest phase span over the open slits for field points in `[-x_extent, x_extent]`.
pub fn max_phase_span(beam: &BeamParams, y: f64, spec: &ApertureSpec, x_extent: f64) -> f64 {
    let k = beam.wavenumber();
    spec.open_slits()
        .iter()
        .flat_map(|slit| [-x_extent, x_extent].map(|x| phase_span(k, y, slit, x)))
        .fold(0.0, f64::max)
}

/// Nodes per slit for the default [`QuadratureSettings`].
pub fn quadrature_node_count(beam: &BeamParams, y: f64, spec: &ApertureSpec, x_extent: f64) -> Result<usize> {
    quadrature_node_count_with(&QuadratureSettings::default(), beam, y, spec, x_extent)
}

/// Nodes per slit: `max(min_nodes, ⌈oversample · span / 2π⌉)`.
pub fn quadrature_node_count_with(
    settings: &QuadratureSettings,
    beam: &BeamParams,
    y: f64,
    spec: &ApertureSpec,
    x_extent: f64,
) -> Result<usize> {
    check_distance(y)?;
    let span = max_phase_span(beam, y, spec, x_extent);
    let needed = (settings.oversample * span / (2.0 * PI)).ceil() as usize;
    Ok(needed.max(settings.min_nodes))
}

fn check_distance(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateGeometry(format!(
            "the diffraction kernel is singular at y = {y}; the slit-plane state is the aperture function"
        )))
    }
}

/// Unnormalized Fresnel-Kirchhoff field with the default node-count rule.
pub fn fresnel_kirchhoff_field(
    spec: &ApertureSpec,
    beam: &BeamParams,
    snapshot: Snapshot,
    grid: &Grid1D,
) -> Result<WaveField> {
    fresnel_kirchhoff_field_with(&QuadratureSettings::default(), spec, beam, snapshot, grid)
}

pub fn fresnel_kirchhoff_field_with(
    settings: &QuadratureSettings,
    spec: &ApertureSpec,
    beam: &BeamParams,
    snapshot: Snapshot,
    grid: &Grid1D,
) -> Result<WaveField> {
    let nodes = quadrature_node_count_with(settings, beam, snapshot.y(), spec, grid.extent())?;
    fresnel_kirchhoff_field_with_nodes(spec, beam, snapshot, grid, nodes)
}

/// Unnormalized field using at least `nodes_per_slit` Gauss-Legendre nodes on each open slit.
///
/// Each grid point is an independent fixed-order sum, so the output does
/// not depend on how rayon schedules the points.
pub fn fresnel_kirchhoff_field_with_nodes(
    spec: &ApertureSpec,
    beam: &BeamParams,
    snapshot: Snapshot,
    grid: &Grid1D,
    nodes_per_slit: usize,
) -> Result<WaveField> {
    let y = snapshot.y();
    check_distance(y)?;
    let k = beam.wavenumber();
    let amplitude = spec.amplitude();
    let rules: Vec<CompositeRule> =
        spec.open_slits().iter().map(|s| CompositeRule::new(s.lo, s.hi, nodes_per_slit)).collect();

    let values: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.at(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for rule in &rules {
                for &(xp, w) in rule.points() {
                    let node = QuadratureNode::new(xp, w, x, y);
                    acc += node.kernel(k, x, y) * w;
                }
            }
            acc * amplitude
        })
        .collect();
    WaveField::new(*grid, values, snapshot)
}

/// Rescales the field so that the trapezoid integral of `|ψ|²` is one.
///
/// `norm_raw` keeps the norm the field had before this call.
pub fn normalize_field(field: &WaveField) -> Result<WaveField> {
    let norm = l2_norm(&field.grid, &field.values);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Normalization);
    }
    let values = field.values.iter().map(|v| v / norm).collect();
    Ok(WaveField { grid: field.grid, values, snapshot: field.snapshot, norm_raw: norm })
}

/// The slit-plane state sampled on `grid` by cell averages.
///
/// Cell averaging gives slit edges that fall on a node half weight, which
/// keeps trapezoid transforms of the state second-order accurate. The
/// result is not renormalized.
pub fn aperture_field(spec: &ApertureSpec, grid: &Grid1D) -> WaveField {
    let h = grid.spacing();
    let values = grid.points().map(|x| Complex64::new(spec.cell_average(x, h), 0.0)).collect();
    WaveField::new(*grid, values, Snapshot::SLIT_PLANE).expect("one value per grid point")
}

/// Normalized `ψ(x, t)` on `grid`; the aperture function at `t = 0`.
pub fn transverse_wavefunction(spec: &ApertureSpec, beam: &BeamParams, t: f64, grid: &Grid1D) -> Result<WaveField> {
    let snapshot = Snapshot::at_time(t, beam.velocity())?;
    wavefunction_at(spec, beam, snapshot, grid, &QuadratureSettings::default())
}

/// Normalized field at a snapshot with explicit quadrature settings.
pub fn wavefunction_at(
    spec: &ApertureSpec,
    beam: &BeamParams,
    snapshot: Snapshot,
    grid: &Grid1D,
    settings: &QuadratureSettings,
) -> Result<WaveField> {
    if snapshot.is_slit_plane() {
        return Ok(aperture_field(spec, grid));
    }
    normalize_field(&fresnel_kirchhoff_field_with(settings, spec, beam, snapshot, grid)?)
}
