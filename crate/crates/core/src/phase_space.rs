//! Joint densities over `(x, kₓ)`.
//!
//! Two densities are built from the same state: the de Broglie density
//! `P′ = |ψ(x)|² |c′(kₓ)|²`, a product and therefore never negative, and
//! the Wigner function
//!
//! ```text
//! W′(x, kₓ) = (1/π) ∫ dξ e^{2ikₓξ} ψ*(x + ξ) ψ(x - ξ)
//! ```
//!
//! which has the same marginals but can be negative. Both are stored in
//! the primed convention (`P′ = ħP`, `W′ = ħW`), dimensionless.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::czt::Chirp;
use crate::diffraction::WaveField;
use crate::error::{Error, Result};
use crate::model::{Grid1D, Snapshot};
use crate::spectral::SpectralField;

/// Wigner maps must keep `max|Im W′| / max|Re W′|` below this.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-8;

/// Relative threshold for calling a density zero.
pub const ZERO_THRESHOLD: f64 = 1e-3;

/// Cells below `-NEGATIVE_THRESHOLD · max|W′|` count as negative.
pub const NEGATIVE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    DeBroglie,
    Wigner,
}

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Row-major, one row per x.
    Dense(Vec<f64>),
    /// `value(i, j) = rows[i] * cols[j]`.
    Separable { rows: Vec<f64>, cols: Vec<f64> },
}

/// A real density sampled on an `x × kₓ` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceMap {
    xgrid: Grid1D,
    kgrid: Grid1D,
    storage: Storage,
    kind: MapKind,
    snapshot: Snapshot,
    residue: f64,
}

impl PhaseSpaceMap {
    /// A dense map from row-major values.
    pub fn from_dense(
        kind: MapKind,
        xgrid: Grid1D,
        kgrid: Grid1D,
        values: Vec<f64>,
        snapshot: Snapshot,
    ) -> Result<Self> {
        if values.len() != xgrid.len() * kgrid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} map",
                values.len(),
                xgrid.len(),
                kgrid.len()
            )));
        }
        Ok(Self { xgrid, kgrid, storage: Storage::Dense(values), kind, snapshot, residue: 0.0 })
    }

    pub fn xgrid(&self) -> &Grid1D {
        &self.xgrid
    }

    pub fn kgrid(&self) -> &Grid1D {
        &self.kgrid
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn snapshot(&self) -> Snapshot {
        self.snapshot
    }

    /// `max|Im W′| / max|Re W′|` left by the Wigner sum; zero for other maps.
    pub fn imaginary_residue(&self) -> f64 {
        self.residue
    }

    /// `(x count, kₓ count)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.xgrid.len(), self.kgrid.len())
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v[i * self.kgrid.len() + j],
            Storage::Separable { rows, cols } => rows[i] * cols[j],
        }
    }

    /// Values of row `i` (fixed x).
    pub fn row(&self, i: usize) -> Vec<f64> {
        let nk = self.kgrid.len();
        match &self.storage {
            Storage::Dense(v) => v[i * nk..(i + 1) * nk].to_vec(),
            Storage::Separable { rows, cols } => cols.iter().map(|c| rows[i] * c).collect(),
        }
    }

    /// Values of column `j` (fixed kₓ).
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.xgrid.len()).map(|i| self.value(i, j)).collect()
    }

    /// All values, row-major.
    pub fn to_dense(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(v) => v.clone(),
            Storage::Separable { .. } => (0..self.xgrid.len()).flat_map(|i| self.row(i)).collect(),
        }
    }

    pub fn is_separable(&self) -> bool {
        matches!(self.storage, Storage::Separable { .. })
    }

    pub fn max_abs(&self) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            Storage::Separable { rows, cols } => max_abs(rows) * max_abs(cols),
        }
    }

    pub fn min_value(&self) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v.iter().copied().fold(f64::INFINITY, f64::min),
            Storage::Separable { rows, cols } => {
                let (rl, rh) = min_max(rows);
                let (cl, ch) = min_max(cols);
                [rl * cl, rl * ch, rh * cl, rh * ch].into_iter().fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Trapezoid double integral over the map.
    pub fn integral(&self) -> f64 {
        self.xgrid.integrate(&marginal_x(self))
    }

    /// Trapezoid double integral of `f(value)`.
    fn integrate_with(&self, f: impl Fn(f64) -> f64) -> f64 {
        let (nx, nk) = self.dims();
        let mut total = 0.0;
        for i in 0..nx {
            let wx = self.xgrid.trapezoid_weight(i);
            let row = self.row(i);
            let s: f64 = (0..nk).map(|j| self.kgrid.trapezoid_weight(j) * f(row[j])).sum();
            total += wx * s;
        }
        total
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn check_same_snapshot(field: &WaveField, spectrum: &SpectralField) -> Result<()> {
    let (a, b) = (field.snapshot(), spectrum.source_snapshot());
    if a == b {
        Ok(())
    } else {
        Err(Error::SnapshotMismatch { field_y: a.y(), spectrum_y: b.y() })
    }
}

/// de Broglie density `P′(x, kₓ) = |ψ(x)|² |c′(kₓ)|²` on the field grid
/// times the spectrum grid.
pub fn de_broglie_density(field: &WaveField, spectrum: &SpectralField) -> Result<PhaseSpaceMap> {
    let rows = field.grid().len();
    de_broglie_on_rows(field, spectrum, *field.grid(), 0, 1, rows)
}

/// de Broglie density with rows snapped onto the field grid from `xgrid`.
pub fn de_broglie_density_on(field: &WaveField, spectrum: &SpectralField, xgrid: &Grid1D) -> Result<PhaseSpaceMap> {
    let (snapped, first, stride) = field.grid().snap(xgrid)?;
    de_broglie_on_rows(field, spectrum, snapped, first, stride, snapped.len())
}

fn de_broglie_on_rows(
    field: &WaveField,
    spectrum: &SpectralField,
    xgrid: Grid1D,
    first: usize,
    stride: usize,
    n: usize,
) -> Result<PhaseSpaceMap> {
    check_same_snapshot(field, spectrum)?;
    let psi = field.values();
    let rows = (0..n).map(|r| psi[first + r * stride].norm_sqr()).collect();
    Ok(PhaseSpaceMap {
        xgrid,
        kgrid: *spectrum.kgrid(),
        storage: Storage::Separable { rows, cols: spectrum.density() },
        kind: MapKind::DeBroglie,
        snapshot: field.snapshot(),
        residue: 0.0,
    })
}

/// Wigner function with one row per field grid point.
pub fn wigner_function(field: &WaveField, kgrid: &Grid1D) -> Result<PhaseSpaceMap> {
    let n = field.grid().len();
    wigner_on_rows(field, *field.grid(), 0, 1, n, kgrid)
}

/// Wigner function on rows snapped onto the field grid from `xgrid`.
///
/// The ξ integral always runs over the whole field window at the field
/// spacing, so `x ± ξ` lands on grid nodes; the field is zero outside its
/// window.
pub fn wigner_function_on(field: &WaveField, xgrid: &Grid1D, kgrid: &Grid1D) -> Result<PhaseSpaceMap> {
    let (snapped, first, stride) = field.grid().snap(xgrid)?;
    wigner_on_rows(field, snapped, first, stride, snapped.len(), kgrid)
}

/// Largest `|kₓ|` a Wigner map can resolve on a field of spacing `h`:
/// the integer-step ξ sum is periodic in `kₓ` with period `π/h`.
pub fn wigner_k_limit(h: f64) -> f64 {
    0.5 * PI / h
}

fn wigner_on_rows(
    field: &WaveField,
    xgrid: Grid1D,
    first: usize,
    stride: usize,
    n_rows: usize,
    kgrid: &Grid1D,
) -> Result<PhaseSpaceMap> {
    let fgrid = field.grid();
    let h = fgrid.spacing();
    let limit = wigner_k_limit(h);
    if kgrid.extent() > limit * (1.0 + 1e-12) {
        return Err(Error::Sampling(format!(
            "Wigner |kx| up to {:e} 1/m exceeds pi/(2 dx) = {limit:e} 1/m",
            kgrid.extent()
        )));
    }
    let psi = field.values();
    let n = psi.len();
    let nk = kgrid.len();
    let last = first + (n_rows - 1) * stride;
    // widest ξ range over the requested rows
    let reach = (first..=last).step_by(stride).map(|i| i.min(n - 1 - i)).max().unwrap_or(0);
    let in_len = 2 * reach + 1;

    let theta = 2.0 * h;
    let beta = theta * kgrid.spacing();
    let chirp = Chirp::new(in_len, nk, beta);
    let k0 = kgrid.lo();
    let carrier: Vec<Complex64> =
        (0..in_len).map(|idx| Complex64::from_polar(1.0, theta * k0 * (idx as f64 - reach as f64))).collect();
    let recenter: Vec<Complex64> =
        (0..nk).map(|j| Complex64::from_polar(h / PI, -beta * (j as f64) * reach as f64)).collect();

    let mut values = vec![0.0; n_rows * nk];
    let residues: Vec<(f64, f64)> = values
        .par_chunks_mut(nk)
        .enumerate()
        .map_init(
            || (chirp.scratch(), vec![Complex64::new(0.0, 0.0); in_len], vec![Complex64::new(0.0, 0.0); nk]),
            |(buf, input, out), (r, row)| {
                let i = first + r * stride;
                for (idx, slot) in input.iter_mut().enumerate() {
                    let m = idx as isize - reach as isize;
                    let (a, b) = (i as isize + m, i as isize - m);
                    *slot = if a >= 0 && b >= 0 && (a as usize) < n && (b as usize) < n {
                        psi[a as usize].conj() * psi[b as usize] * carrier[idx]
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                }
                chirp.eval(input, buf, out);
                let (mut im, mut re) = (0.0f64, 0.0f64);
                for ((slot, x), c) in row.iter_mut().zip(out.iter()).zip(&recenter) {
                    let w = x * c;
                    *slot = w.re;
                    im = im.max(w.im.abs());
                    re = re.max(w.re.abs());
                }
                (im, re)
            },
        )
        .collect();

    let (im, re) = residues.iter().fold((0.0f64, 0.0f64), |(a, b), &(i, r)| (a.max(i), b.max(r)));
    let residue = if re > 0.0 { im / re } else { 0.0 };
    if residue > IMAGINARY_RESIDUE_LIMIT {
        return Err(Error::ImaginaryResidue { residue, threshold: IMAGINARY_RESIDUE_LIMIT });
    }
    let mut map = PhaseSpaceMap::from_dense(MapKind::Wigner, xgrid, *kgrid, values, field.snapshot())?;
    map.residue = residue;
    Ok(map)
}

/// Position density: trapezoid integral over `kₓ` of every row.
pub fn marginal_x(map: &PhaseSpaceMap) -> Vec<f64> {
    match &map.storage {
        Storage::Separable { rows, cols } => {
            let s = map.kgrid.integrate(cols);
            rows.iter().map(|r| r * s).collect()
        }
        Storage::Dense(_) => (0..map.xgrid.len()).map(|i| map.kgrid.integrate(&map.row(i))).collect(),
    }
}

/// Momentum density: trapezoid integral over `x` of every column.
pub fn marginal_k(map: &PhaseSpaceMap) -> Vec<f64> {
    match &map.storage {
        Storage::Separable { rows, cols } => {
            let s = map.xgrid.integrate(rows);
            cols.iter().map(|c| c * s).collect()
        }
        Storage::Dense(v) => {
            let nk = map.kgrid.len();
            let mut acc = vec![0.0; nk];
            for (i, row) in v.chunks(nk).enumerate() {
                let w = map.xgrid.trapezoid_weight(i);
                for (a, x) in acc.iter_mut().zip(row) {
                    *a += w * x;
                }
            }
            acc
        }
    }
}

/// How negative a map is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Negativity {
    pub min_value: f64,
    /// `∬ max(-W′, 0) dx dkₓ`.
    pub negative_volume: f64,
    /// `∬ |W′| dx dkₓ`.
    pub absolute_volume: f64,
    /// Fraction of grid cells below `-NEGATIVE_THRESHOLD · max|W′|`.
    pub negative_fraction: f64,
}

pub fn negativity_metrics(map: &PhaseSpaceMap) -> Negativity {
    let cutoff = -NEGATIVE_THRESHOLD * map.max_abs();
    let (nx, nk) = map.dims();
    let negative_cells: usize = (0..nx).map(|i| map.row(i).iter().filter(|&&v| v < cutoff).count()).sum();
    Negativity {
        min_value: map.min_value(),
        negative_volume: map.integrate_with(|v| (-v).max(0.0)),
        absolute_volume: map.integrate_with(f64::abs),
        negative_fraction: negative_cells as f64 / (nx * nk) as f64,
    }
}

/// A phase-space line through a zero of one of the marginal densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroLine {
    /// Row (position line) or column (momentum line) index in the map.
    pub index: usize,
    /// `x` or `kₓ` of the line.
    pub coord: f64,
    /// Density at the line relative to its maximum.
    pub density_ratio: f64,
    /// Largest `|map value|` along the line.
    pub line_max: f64,
}

/// Where the marginals vanish and what the map does there.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetReport {
    pub threshold: f64,
    pub map_max: f64,
    /// Lines `x = x̃` with `|ψ(x̃)|² ≤ threshold · max|ψ|²`.
    pub position_lines: Vec<ZeroLine>,
    /// Lines `kₓ = k̃` with `|c′(k̃)|² ≤ threshold · max|c′|²`.
    pub momentum_lines: Vec<ZeroLine>,
    /// True iff the map is below `threshold · map_max` on every zero line.
    pub consistent: bool,
}

impl ZeroSetReport {
    /// The momentum zero line closest to `kx`.
    pub fn momentum_line_near(&self, kx: f64) -> Option<&ZeroLine> {
        self.momentum_lines.iter().min_by(|a, b| (a.coord - kx).abs().total_cmp(&(b.coord - kx).abs()))
    }

    /// Largest line value relative to the map maximum.
    pub fn worst_ratio(&self) -> f64 {
        let worst = self.position_lines.iter().chain(&self.momentum_lines).fold(0.0f64, |m, l| m.max(l.line_max));
        if self.map_max > 0.0 {
            worst / self.map_max
        } else {
            0.0
        }
    }
}

/// Checks whether `map` vanishes wherever `|ψ|²` or `|c′|²` does.
///
/// Densities are read at the nearest field and spectrum nodes to each map
/// row and column, and compared with their maxima over those nodes.
pub fn zero_set_consistency(field: &WaveField, spectrum: &SpectralField, map: &PhaseSpaceMap) -> ZeroSetReport {
    let (nx, nk) = map.dims();
    let psi = field.values();
    let pos: Vec<f64> = map.xgrid.points().map(|x| psi[field.grid().nearest_index(x)].norm_sqr()).collect();
    let c = spectrum.values();
    let mom: Vec<f64> = map.kgrid.points().map(|k| c[spectrum.kgrid().nearest_index(k)].norm_sqr()).collect();
    let (pos_max, mom_max) = (max_abs(&pos), max_abs(&mom));
    let map_max = map.max_abs();
    let threshold = ZERO_THRESHOLD;

    let position_lines: Vec<ZeroLine> = (0..nx)
        .filter(|&i| pos[i] <= threshold * pos_max)
        .map(|i| ZeroLine {
            index: i,
            coord: map.xgrid.at(i),
            density_ratio: pos[i] / pos_max,
            line_max: max_abs(&map.row(i)),
        })
        .collect();
    let momentum_lines: Vec<ZeroLine> = (0..nk)
        .filter(|&j| mom[j] <= threshold * mom_max)
        .map(|j| ZeroLine {
            index: j,
            coord: map.kgrid.at(j),
            density_ratio: mom[j] / mom_max,
            line_max: max_abs(&map.column(j)),
        })
        .collect();
    let limit = threshold * map_max * (1.0 + 1e-12);
    let consistent = position_lines.iter().chain(&momentum_lines).all(|l| l.line_max <= limit);
    ZeroSetReport { threshold, map_max, position_lines, momentum_lines, consistent }
}
