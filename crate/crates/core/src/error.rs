use thiserror::Error;

/// Errors raised by the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The diffraction kernel is singular for the requested geometry.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A field with zero norm cannot be normalized.
    #[error("cannot normalize a field with zero norm")]
    Normalization,

    /// A grid is too coarse or too wide for the samples it is paired with.
    #[error("sampling error: {0}")]
    Sampling(String),

    /// Two objects that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A field and a spectrum belong to different snapshots.
    #[error("snapshot mismatch: field at y = {field_y} m, spectrum at y = {spectrum_y} m")]
    SnapshotMismatch { field_y: f64, spectrum_y: f64 },

    /// The Wigner sum left an imaginary part larger than discretization allows.
    #[error("numerical integrity: imaginary residue {residue:e} exceeds {threshold:e} of the map maximum")]
    ImaginaryResidue { residue: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
