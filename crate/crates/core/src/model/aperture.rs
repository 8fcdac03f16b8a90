use std::fmt;

use crate::error::{Error, Result};

/// Which slits of the two-slit screen are open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlitKind {
    /// Only the lower slit `[-Δ/2 - δ, -Δ/2]` is open.
    SingleLower,
    /// Only the upper slit `[Δ/2, Δ/2 + δ]` is open.
    SingleUpper,
    /// Both slits are open.
    Double,
}

impl SlitKind {
    pub fn name(self) -> &'static str {
        match self {
            SlitKind::SingleLower => "single",
            SlitKind::SingleUpper => "single_upper",
            SlitKind::Double => "double",
        }
    }
}

impl fmt::Display for SlitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A closed interval of the slit plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slit {
    pub lo: f64,
    pub hi: f64,
}

impl Slit {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Boundary points belong to the slit.
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Length of `[a, b] ∩ [lo, hi]`.
    pub fn overlap(&self, a: f64, b: f64) -> f64 {
        (b.min(self.hi) - a.max(self.lo)).max(0.0)
    }
}

/// Geometry of the slit screen.
///
/// `delta` is the opening of each slit (δ) and `gap` the distance between
/// the inner edges of the two slits (Δ), so the slit centers are `Δ + δ`
/// apart. The aperture amplitude is chosen so that `∫|φ|² dx′ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureSpec {
    kind: SlitKind,
    delta: f64,
    gap: f64,
}

impl ApertureSpec {
    pub fn new(kind: SlitKind, delta: f64, gap: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::Domain(format!("slit width must be positive, got {delta}")));
        }
        if !(gap.is_finite() && gap > 0.0) {
            return Err(Error::Domain(format!("slit gap must be positive, got {gap}")));
        }
        Ok(Self { kind, delta, gap })
    }

    /// Geometry from the center-to-center slit separation `Δ + δ`.
    pub fn from_separation(kind: SlitKind, delta: f64, separation: f64) -> Result<Self> {
        Self::new(kind, delta, separation - delta)
    }

    /// The helium experiment: δ = 1 μm, Δ + δ = 8 μm.
    pub fn helium(kind: SlitKind) -> Self {
        Self::new(kind, 1e-6, 7e-6).expect("helium geometry is valid")
    }

    pub fn kind(&self) -> SlitKind {
        self.kind
    }

    pub fn with_kind(&self, kind: SlitKind) -> Self {
        Self { kind, ..*self }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Center-to-center distance `Δ + δ`.
    pub fn separation(&self) -> f64 {
        self.gap + self.delta
    }

    pub fn lower_slit(&self) -> Slit {
        Slit { lo: -0.5 * self.gap - self.delta, hi: -0.5 * self.gap }
    }

    pub fn upper_slit(&self) -> Slit {
        Slit { lo: 0.5 * self.gap, hi: 0.5 * self.gap + self.delta }
    }

    /// The open slits, lower first.
    pub fn open_slits(&self) -> Vec<Slit> {
        match self.kind {
            SlitKind::SingleLower => vec![self.lower_slit()],
            SlitKind::SingleUpper => vec![self.upper_slit()],
            SlitKind::Double => vec![self.lower_slit(), self.upper_slit()],
        }
    }

    /// Constant amplitude over the open slits: `1/√δ` or `1/√(2δ)`.
    pub fn amplitude(&self) -> f64 {
        let open = self.open_slits().len() as f64;
        (open * self.delta).sqrt().recip()
    }

    /// Largest `|x′|` covered by an open slit.
    pub fn half_extent(&self) -> f64 {
        0.5 * self.gap + self.delta
    }

    /// Mean of the aperture function over the cell `[x - h/2, x + h/2]`.
    ///
    /// Used to sample the slit-plane state on a grid without a half-cell
    /// bias at the slit edges.
    pub fn cell_average(&self, x: f64, h: f64) -> f64 {
        let (a, b) = (x - 0.5 * h, x + 0.5 * h);
        let covered: f64 = self.open_slits().iter().map(|s| s.overlap(a, b)).sum();
        self.amplitude() * covered / h
    }
}

/// The aperture function `φ(x′, 0)` of the slit screen.
pub fn aperture_amplitude(spec: &ApertureSpec, xprime: f64) -> f64 {
    if spec.open_slits().iter().any(|s| s.contains(xprime)) {
        spec.amplitude()
    } else {
        0.0
    }
}
