//! Domain types shared by every stage of the pipeline: beam constants, slit
//! geometry, sampling grids and snapshots.
//!
//! Everything is SI and `f64`; nothing is nondimensionalized.

mod aperture;
mod beam;
mod grid;

pub use aperture::{aperture_amplitude, ApertureSpec, Slit, SlitKind};
pub use beam::{make_beam_params, BeamParams, HBAR, HELIUM_MASS, HELIUM_WAVENUMBER};
pub use grid::{make_grid, Grid1D, Snapshot};
