use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Reduced Planck constant (CODATA 2018), J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Mass of the metastable helium atom used in the double-slit experiment, kg.
pub const HELIUM_MASS: f64 = 6.646_32e-27;

/// Longitudinal wavenumber of the helium beam, 4π·10¹⁰ m⁻¹.
pub const HELIUM_WAVENUMBER: f64 = 4.0 * PI * 1e10;

/// Longitudinal beam constants.
///
/// Only the wavenumber and the mass are free; velocity, wavelength and
/// angular frequency are derived on construction from `p = ħk = mv` and
/// `ħω = p²/2m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    k: f64,
    m: f64,
    hbar: f64,
    v: f64,
    lambda: f64,
    omega: f64,
}

impl BeamParams {
    /// Beam with the CODATA value of ħ.
    pub fn new(k: f64, m: f64) -> Result<Self> {
        Self::with_hbar(k, m, HBAR)
    }

    /// Beam with an explicit ħ, for unit-system experiments.
    pub fn with_hbar(k: f64, m: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("wavenumber", k), ("mass", m), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {value}")));
            }
        }
        Ok(Self { k, m, hbar, v: hbar * k / m, lambda: 2.0 * PI / k, omega: hbar * k * k / (2.0 * m) })
    }

    /// The metastable helium beam: k = 4π·10¹⁰ m⁻¹, m = 6.64632·10⁻²⁷ kg.
    pub fn helium() -> Self {
        Self::new(HELIUM_WAVENUMBER, HELIUM_MASS).expect("helium constants are valid")
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Longitudinal speed `ħk/m`, m/s.
    pub fn velocity(&self) -> f64 {
        self.v
    }

    /// de Broglie wavelength `2π/k`, m.
    pub fn wavelength(&self) -> f64 {
        self.lambda
    }

    /// Angular frequency with `ħω = (ħk)²/2m`, 1/s.
    pub fn angular_frequency(&self) -> f64 {
        self.omega
    }

    /// Longitudinal momentum `ħk`, kg·m/s.
    pub fn momentum(&self) -> f64 {
        self.hbar * self.k
    }
}

/// Builds [`BeamParams`] from a wavenumber and a mass.
pub fn make_beam_params(k: f64, m: f64) -> Result<BeamParams> {
    BeamParams::new(k, m)
}
