//! Atom diffraction through one or two slits.
//!
//! The pipeline follows a single atom's transverse state through a
//! two-slit screen:
//!
//! 1. [`model`]: beam constants, slit geometry, grids and snapshots.
//! 2. [`diffraction`]: the Fresnel-Kirchhoff field behind the screen,
//!    read as a time-dependent transverse wavefunction `ψ(x, t)` through
//!    `y = vt`.
//! 3. [`spectral`]: the transverse-momentum spectrum `c′(kₓ)` and the
//!    closed-form far-field transforms of the slit apertures.
//! 4. [`phase_space`]: the de Broglie joint density `|ψ|²|c′|²` and the
//!    Wigner function, with marginals, negativity and zero-set reports.
//!
//! ```
//! use slitwave::prelude::*;
//!
//! let beam = BeamParams::helium();
//! let spec = ApertureSpec::helium(SlitKind::Double);
//! let grid = Grid1D::new(-32e-6, 32e-6, 2048)?;
//! let psi = wavefunction_at(&spec, &beam, Snapshot::at_distance(0.12, beam.velocity())?, &grid,
//!     &QuadratureSettings::default())?;
//! assert!((psi.probability() - 1.0).abs() < 1e-10);
//! # Ok::<(), slitwave::Error>(())
//! ```

mod czt;
pub mod diffraction;
mod error;
pub mod model;
pub mod phase_space;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};

/// The types and operations most programs need.
pub mod prelude {
    pub use crate::diffraction::{
        aperture_field, fresnel_kirchhoff_field, normalize_field, quadrature_node_count, transverse_wavefunction,
        wavefunction_at, QuadratureSettings, WaveField,
    };
    pub use crate::model::{
        aperture_amplitude, make_beam_params, make_grid, ApertureSpec, BeamParams, Grid1D, SlitKind, Snapshot,
    };
    pub use crate::phase_space::{
        de_broglie_density, marginal_k, marginal_x, negativity_metrics, wigner_function, zero_set_consistency, MapKind,
        PhaseSpaceMap,
    };
    pub use crate::spectral::{
        fraunhofer_double, fraunhofer_single, fraunhofer_transform, momentum_spectrum, spectrum_vs_fraunhofer,
        time_independence_deviation, SpectralField,
    };
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/diffraction.md")]
    mod diffraction {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/phase-space.md")]
    mod phase_space {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
