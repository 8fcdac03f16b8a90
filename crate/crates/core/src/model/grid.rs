use crate::error::{Error, Result};

/// A uniform one-dimensional sampling grid including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("a grid needs at least 2 samples, got {n}")));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::Domain(format!("grid bounds must satisfy lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Sample `i`; the last sample is exactly `hi`.
    pub fn at(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.at(i))
    }

    /// Largest `|x|` on the grid.
    pub fn extent(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Index of the sample closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.lo) / self.spacing()).round();
        t.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Composite trapezoid weight of sample `i`.
    pub fn trapezoid_weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            0.5 * self.spacing()
        } else {
            self.spacing()
        }
    }

    /// Composite trapezoid rule over samples taken on this grid.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.n);
        let interior: f64 = samples[1..self.n - 1].iter().sum();
        self.spacing() * (interior + 0.5 * (samples[0] + samples[self.n - 1]))
    }

    /// Nodes of this grid chosen to approximate the requested grid.
    ///
    /// The stride is the requested spacing rounded to a whole number of
    /// samples (at least one) and the first node is the sample nearest to
    /// `requested.lo()`. Returns the snapped grid with the index of its first
    /// node and its stride; the count is reduced if the request runs past
    /// the end of this grid.
    pub fn snap(&self, requested: &Grid1D) -> Result<(Grid1D, usize, usize)> {
        let h = self.spacing();
        let stride = ((requested.spacing() / h).round() as usize).max(1);
        let first = self.nearest_index(requested.lo());
        let available = (self.n - 1 - first) / stride + 1;
        let n = requested.len().min(available);
        if n < 2 {
            return Err(Error::Sampling(format!(
                "requested grid [{}, {}] leaves fewer than 2 nodes on the field grid",
                requested.lo(),
                requested.hi()
            )));
        }
        let last = first + (n - 1) * stride;
        let grid = Grid1D::new(self.at(first), self.at(last), n)?;
        Ok((grid, first, stride))
    }
}

/// Builds a uniform grid with `n` samples from `lo` to `hi`.
pub fn make_grid(lo: f64, hi: f64, n: usize) -> Result<Grid1D> {
    Grid1D::new(lo, hi, n)
}

/// A point along the beam: distance `y` from the slit plane and the
/// corresponding flight time `t = y/v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    y: f64,
    t: f64,
}

impl Snapshot {
    /// The slit plane itself, `y = t = 0`.
    pub const SLIT_PLANE: Snapshot = Snapshot { y: 0.0, t: 0.0 };

    pub fn at_distance(y: f64, velocity: f64) -> Result<Self> {
        check_velocity(velocity)?;
        if !(y.is_finite() && y >= 0.0) {
            return Err(Error::Domain(format!("distance from the slits must be non-negative, got {y}")));
        }
        Ok(Self { y, t: y / velocity })
    }

    pub fn at_time(t: f64, velocity: f64) -> Result<Self> {
        check_velocity(velocity)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!("evolution time must be non-negative, got {t}")));
        }
        Ok(Self { y: velocity * t, t })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn is_slit_plane(&self) -> bool {
        self.y == 0.0
    }
}

fn check_velocity(v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("beam velocity must be positive, got {v}")))
    }
}
