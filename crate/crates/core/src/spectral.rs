//! Transverse-momentum spectra.
//!
//! `C(kₓ, t) = (2π)^{-1/2} ∫ ψ(x, t) e^{-ikₓx} dx` is evaluated as a direct
//! trapezoid-weighted sum onto an arbitrary uniform `kₓ` grid. Stored
//! amplitudes are `c′(kₓ)` in √m, so `|c′|²` integrates to one over `kₓ`;
//! densities in `pₓ` follow by dividing by ħ.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::diffraction::WaveField;
use crate::error::{Error, Result};
use crate::model::{ApertureSpec, Grid1D, SlitKind, Snapshot};

/// Below this `|kₓ|δ` the far-field transforms switch to their Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Momentum-space amplitudes of one snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    kgrid: Grid1D,
    values: Vec<Complex64>,
    source_snapshot: Snapshot,
}

impl SpectralField {
    pub fn new(kgrid: Grid1D, values: Vec<Complex64>, source_snapshot: Snapshot) -> Result<Self> {
        if values.len() != kgrid.len() {
            return Err(Error::GridMismatch(format!(
                "{} amplitudes for a k-grid of {} points",
                values.len(),
                kgrid.len()
            )));
        }
        Ok(Self { kgrid, values, source_snapshot })
    }

    pub fn kgrid(&self) -> &Grid1D {
        &self.kgrid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn source_snapshot(&self) -> Snapshot {
        self.source_snapshot
    }

    /// `|c′(kₓ)|²` at every grid point, in m.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// `|c(pₓ)|² = |c′(kₓ)|²/ħ`.
    pub fn momentum_density(&self, hbar: f64) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr() / hbar).collect()
    }

    /// Trapezoid integral of `|c′|²` over the grid (Parseval check).
    pub fn probability(&self) -> f64 {
        self.kgrid.integrate(&self.density())
    }
}

/// Checks that `kgrid` can be paired with a field sampled on `xgrid`.
///
/// The largest wavenumber must not exceed the sampling limit `π/Δx`, and the
/// k spacing must resolve a field filling the window, `Δk ≤ 2π/(x_hi - x_lo)`.
pub fn check_nyquist(xgrid: &Grid1D, kgrid: &Grid1D) -> Result<()> {
    let k_limit = PI / xgrid.spacing();
    let k_max = kgrid.extent();
    if k_max > k_limit * (1.0 + 1e-12) {
        return Err(Error::Sampling(format!(
            "|kx| up to {k_max:e} 1/m exceeds the x-grid limit pi/dx = {k_limit:e} 1/m"
        )));
    }
    let dk_limit = 2.0 * PI / xgrid.width();
    if kgrid.spacing() > dk_limit * (1.0 + 1e-12) {
        return Err(Error::Sampling(format!(
            "k spacing {:e} 1/m is coarser than 2*pi/window = {dk_limit:e} 1/m",
            kgrid.spacing()
        )));
    }
    Ok(())
}

/// The Fourier amplitude `C(kₓ, t)` of `field` on `kgrid`.
///
/// Each `kₓ` is an independent fixed-order sum. The twiddle factor is
/// advanced by complex multiplication and re-anchored every
/// [`REANCHOR`] samples so rounding does not accumulate.
pub fn momentum_spectrum(field: &WaveField, kgrid: &Grid1D) -> Result<SpectralField> {
    let xgrid = field.grid();
    check_nyquist(xgrid, kgrid)?;
    let psi = field.values();
    let (n, h, x0) = (xgrid.len(), xgrid.spacing(), xgrid.lo());
    let scale = h / (2.0 * PI).sqrt();

    let values: Vec<Complex64> = (0..kgrid.len())
        .into_par_iter()
        .map(|j| {
            let k = kgrid.at(j);
            let step = Complex64::from_polar(1.0, -k * h);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut twiddle = Complex64::new(1.0, 0.0);
            for (i, p) in psi.iter().enumerate() {
                if i % REANCHOR == 0 {
                    twiddle = Complex64::from_polar(1.0, -k * (x0 + i as f64 * h));
                }
                let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
                acc += p * twiddle * w;
                twiddle *= step;
            }
            acc * scale
        })
        .collect();
    SpectralField::new(*kgrid, values, field.snapshot())
}

/// Twiddle re-anchoring period of [`momentum_spectrum`].
pub const REANCHOR: usize = 256;

/// Relative L² distance `‖|a|² - |b|²‖ / ‖|a|²‖` between two spectra on the same grid.
pub fn time_independence_deviation(spec_a: &SpectralField, spec_b: &SpectralField) -> Result<f64> {
    if spec_a.kgrid != spec_b.kgrid {
        return Err(Error::GridMismatch("spectra are sampled on different k-grids".into()));
    }
    Ok(relative_l2(&spec_a.density(), &spec_b.density()))
}

/// `‖b - a‖₂ / ‖a‖₂` on a shared uniform grid.
pub fn relative_l2(reference: &[f64], other: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in reference.iter().zip(other) {
        num += (b - a) * (b - a);
        den += a * a;
    }
    (num / den).sqrt()
}

/// `sin(kδ/2)/k`, with its Taylor series near zero.
fn half_sinc(kx: f64, delta: f64) -> f64 {
    let a = 0.5 * kx * delta;
    if (kx * delta).abs() < SERIES_THRESHOLD {
        0.5 * delta * (1.0 - a * a / 6.0)
    } else {
        a.sin() / kx
    }
}

/// Far-field transform of the lower slit alone,
/// `F₁(kₓ) = i e^{ikₓΔ/2} (1 - e^{ikₓδ}) / (kₓ √(2πδ))`.
///
/// Evaluated as `2 e^{ikₓ(Δ+δ)/2} sin(kₓδ/2) / (kₓ √(2πδ))`, which has no
/// cancellation and a removable singularity handled by series.
pub fn fraunhofer_single(kx: f64, spec: &ApertureSpec) -> Complex64 {
    let delta = spec.delta();
    let phase = Complex64::from_polar(1.0, 0.5 * kx * spec.separation());
    phase * (2.0 * half_sinc(kx, delta) / (2.0 * PI * delta).sqrt())
}

/// Far-field transform of both slits,
/// `F₂(kₓ) = 2 sin(kₓδ/2) cos(kₓ(Δ+δ)/2) / (kₓ √(πδ))`.
pub fn fraunhofer_double(kx: f64, spec: &ApertureSpec) -> Complex64 {
    let delta = spec.delta();
    let value = 2.0 * half_sinc(kx, delta) * (0.5 * kx * spec.separation()).cos() / (PI * delta).sqrt();
    Complex64::new(value, 0.0)
}

/// The far-field transform matching the aperture kind.
pub fn fraunhofer_transform(kx: f64, spec: &ApertureSpec) -> Complex64 {
    match spec.kind() {
        SlitKind::SingleLower => fraunhofer_single(kx, spec),
        SlitKind::SingleUpper => fraunhofer_single(-kx, spec),
        SlitKind::Double => fraunhofer_double(kx, spec),
    }
}

/// `|Fᵢ(kₓ)|²` on a grid.
pub fn fraunhofer_density(spec: &ApertureSpec, kgrid: &Grid1D) -> Vec<f64> {
    kgrid.points().map(|k| fraunhofer_transform(k, spec).norm_sqr()).collect()
}

/// Relative L² distance between `|c′|²` and `|Fᵢ|²` on the spectrum's grid.
pub fn spectrum_vs_fraunhofer(spectrum: &SpectralField, spec: &ApertureSpec) -> f64 {
    relative_l2(&fraunhofer_density(spec, spectrum.kgrid()), &spectrum.density())
}

/// Zeros of `|Fᵢ|²` inside `[lo, hi]`, excluding `kₓ = 0`.
///
/// Single slit: `kₓ = 2πn/δ`. Double slit: additionally
/// `kₓ = (2n+1)π/(Δ+δ)`.
pub fn fraunhofer_zeros(spec: &ApertureSpec, lo: f64, hi: f64) -> Vec<f64> {
    let mut zeros = Vec::new();
    let mut push_family = |first: f64, step: f64| {
        let reach = hi.abs().max(lo.abs());
        let mut n = 0.0;
        while first + n * step <= reach {
            let k = first + n * step;
            for z in [k, -k] {
                if z >= lo && z <= hi {
                    zeros.push(z);
                }
            }
            n += 1.0;
        }
    };
    push_family(2.0 * PI / spec.delta(), 2.0 * PI / spec.delta());
    if spec.kind() == SlitKind::Double {
        push_family(PI / spec.separation(), 2.0 * PI / spec.separation());
    }
    zeros.sort_by(f64::total_cmp);
    zeros
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffraction::aperture_field;

    fn single() -> ApertureSpec {
        ApertureSpec::helium(SlitKind::SingleLower)
    }

    fn double() -> ApertureSpec {
        ApertureSpec::helium(SlitKind::Double)
    }

    #[test]
    fn single_at_zero() {
        let v = fraunhofer_single(0.0, &single()).norm_sqr();
        assert!((v - 1e-6 / (2.0 * PI)).abs() < 1e-22);
        assert!((v - 1.5915e-7).abs() < 1e-11);
    }

    #[test]
    fn double_at_zero() {
        let v = fraunhofer_double(0.0, &double()).norm_sqr();
        assert!((v - 1e-6 / PI).abs() < 1e-22);
        assert!((v - 3.1831e-7).abs() < 1e-11);
    }

    #[test]
    fn zeros_of_the_transforms() {
        let z1 = fraunhofer_single(2.0 * PI / 1e-6, &single()).norm_sqr();
        assert!(z1 < 1e-30 * fraunhofer_single(0.0, &single()).norm_sqr().max(1.0));
        let k0 = PI / 8e-6;
        assert!((k0 - 3.927e5).abs() < 1e2);
        let z2 = fraunhofer_double(k0, &double()).norm_sqr();
        assert!(z2 < 1e-30);
    }

    #[test]
    fn literal_single_formula() {
        let spec = single();
        let (delta, gap) = (spec.delta(), spec.gap());
        for kx in [1e3, 3.3e5, -2.1e6, 7.77e6, 1.9e7] {
            let i = Complex64::new(0.0, 1.0);
            let literal = i
                * Complex64::from_polar(1.0, kx * gap / 2.0)
                * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, kx * delta))
                / (kx * (2.0 * PI * delta).sqrt());
            let got = fraunhofer_single(kx, &spec);
            assert!((got - literal).norm() < 1e-10 * literal.norm().max(1e-6), "kx={kx}");
            let modulus = 2.0 * (kx * delta / 2.0).sin().powi(2) / (PI * delta * kx * kx);
            assert!((got.norm_sqr() - modulus).abs() < 1e-12 * modulus.max(1e-12));
        }
    }

    #[test]
    fn double_is_superposition_of_singles() {
        let spec = double();
        for kx in [-1.3e7, -4e5, 0.0, 2e-3, 6.1e5, 1.7e7] {
            let lower = fraunhofer_transform(kx, &spec.with_kind(SlitKind::SingleLower));
            let upper = fraunhofer_transform(kx, &spec.with_kind(SlitKind::SingleUpper));
            let sum = (lower + upper) / 2f64.sqrt();
            assert!((sum - fraunhofer_double(kx, &spec)).norm() < 1e-15);
        }
    }

    #[test]
    fn series_switchover_agrees() {
        for spec in [single(), double()] {
            let delta = spec.delta();
            for kd in [1e-9, 1e-7, 3e-6, 5e-5, 9.9e-5] {
                let kx = kd / delta;
                let a = 0.5 * kx * delta;
                let direct = a.sin() / kx;
                let series = half_sinc(kx, delta);
                assert!(((series - direct) / direct).abs() < 1e-12);
                let f = fraunhofer_transform(kx, &spec);
                let f_direct = match spec.kind() {
                    SlitKind::Double => 2.0 * direct * (0.5 * kx * spec.separation()).cos() / (PI * delta).sqrt(),
                    _ => 2.0 * direct / (2.0 * PI * delta).sqrt(),
                };
                assert!(((f.norm() - f_direct.abs()) / f_direct.abs()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fraunhofer_densities_are_normalized() {
        // beyond |k| = kmax both densities average to 1/(πδk²)
        for spec in [single(), double()] {
            let kmax = 4e9;
            let grid = Grid1D::new(-kmax, kmax, 8_000_001).unwrap();
            let body = grid.integrate(&fraunhofer_density(&spec, &grid));
            let tail = 2.0 / (PI * spec.delta() * kmax);
            assert!((body + tail - 1.0).abs() < 1e-6, "{body} {tail}");
        }
    }

    #[test]
    fn slit_plane_transform_matches_closed_form() {
        // fine grid on a tight window around the slits
        let grid = Grid1D::new(-4.6e-6, 4.6e-6, 18_401).unwrap();
        let kgrid = Grid1D::new(-2e7, 2e7, 801).unwrap();
        for spec in [single(), double()] {
            let psi = aperture_field(&spec, &grid);
            let spectrum = momentum_spectrum(&psi, &kgrid).unwrap();
            let dev = spectrum_vs_fraunhofer(&spectrum, &spec);
            assert!(dev < 1e-6, "{:?}: {dev}", spec.kind());
        }
    }

    #[test]
    fn nyquist_is_enforced() {
        let field = aperture_field(&double(), &Grid1D::new(-64e-6, 64e-6, 8192).unwrap());
        let too_wide = Grid1D::new(-3e8, 3e8, 100_001).unwrap();
        assert!(matches!(momentum_spectrum(&field, &too_wide), Err(Error::Sampling(_))));
        let too_coarse = Grid1D::new(-2e7, 2e7, 101).unwrap();
        assert!(matches!(momentum_spectrum(&field, &too_coarse), Err(Error::Sampling(_))));
    }

    #[test]
    fn identical_spectra_have_zero_deviation() {
        let field = aperture_field(&double(), &Grid1D::new(-8e-6, 8e-6, 1601).unwrap());
        let s = momentum_spectrum(&field, &Grid1D::new(-2e7, 2e7, 513).unwrap()).unwrap();
        assert_eq!(time_independence_deviation(&s, &s).unwrap(), 0.0);
        let other = momentum_spectrum(&field, &Grid1D::new(-1e7, 1e7, 513).unwrap()).unwrap();
        assert!(matches!(time_independence_deviation(&s, &other), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn zero_locations() {
        let z = fraunhofer_zeros(&double(), -2e7, 2e7);
        assert!(z.iter().any(|k| (k - PI / 8e-6).abs() < 1e-6));
        assert!(z.iter().any(|k| (k + 2.0 * PI / 1e-6).abs() < 1e-6));
        let z = fraunhofer_zeros(&single(), -2e7, 2e7);
        assert_eq!(z.len(), 6);
    }
}
