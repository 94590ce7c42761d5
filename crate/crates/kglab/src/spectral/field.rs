use num_complex::Complex64;
use thiserror::Error;

use super::grid::Grid;

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("value count {got} does not match lattice size {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("non-finite value at site {0}")]
    NonFinite(usize),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),
    #[error("a space-time field needs at least two slices, got {0}")]
    TooFewSlices(usize),
}

/// A complex scalar sampled on the lattice sites of a [`Grid`] (physical
/// space, row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self, FieldError> {
        if values.len() != grid.site_count() {
            return Err(FieldError::WrongLength {
                expected: grid.site_count(),
                got: values.len(),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(FieldError::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.site_count()],
        }
    }

    pub fn constant(grid: Grid, c: Complex64) -> Self {
        Self {
            grid,
            values: vec![c; grid.site_count()],
        }
    }

    /// Sample a function of position on the lattice.
    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Complex64) -> Self {
        let values = (0..grid.site_count())
            .map(|i| f(grid.position(i)))
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Plain vector 2-norm of the samples (no measure factor).
    pub fn ell2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `L²` norm with the physical measure `dx^n`.
    pub fn l2_norm(&self) -> f64 {
        self.ell2() * self.grid.cell_volume().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Pointwise product with a real weight sampled on the same lattice.
    pub fn mul_real(&self, weight: &[f64]) -> Self {
        assert_eq!(weight.len(), self.values.len());
        let values = self.values.iter().zip(weight).map(|(v, w)| v * w).collect();
        Self {
            grid: self.grid,
            values,
        }
    }
}

/// Fourier coefficients of a [`ComplexField`] on the dual lattice, in the
/// same row-major layout (unsigned index `j` holding frequency
/// `ξ = (π/L)·signed(j)`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub(crate) fn from_parts(grid: Grid, coefficients: Vec<Complex64>) -> Self {
        debug_assert_eq!(coefficients.len(), grid.site_count());
        Self { grid, coefficients }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn ell2(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Uniformly time-sampled sequence of fields: `slices[m]` lives at
/// `t_m = t0 + m·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: Grid,
    t0: f64,
    dt: f64,
    slices: Vec<ComplexField>,
}

impl SpaceTimeField {
    pub fn new(t0: f64, dt: f64, slices: Vec<ComplexField>) -> Result<Self, FieldError> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(FieldError::BadTimeStep(dt));
        }
        if slices.len() < 2 {
            return Err(FieldError::TooFewSlices(slices.len()));
        }
        let grid = *slices[0].grid();
        if slices.iter().any(|s| *s.grid() != grid) {
            return Err(FieldError::GridMismatch);
        }
        Ok(Self {
            grid,
            t0,
            dt,
            slices,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of time steps `M` (slice count minus one).
    pub fn steps(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn time(&self, m: usize) -> f64 {
        self.t0 + m as f64 * self.dt
    }

    pub fn slices(&self) -> &[ComplexField] {
        &self.slices
    }

    pub fn slice(&self, m: usize) -> &ComplexField {
        &self.slices[m]
    }

    /// Trapezoidal weight of slice `m` (in units of `dt`).
    pub fn trapezoid_weight(&self, m: usize) -> f64 {
        if m == 0 || m == self.steps() {
            0.5
        } else {
            1.0
        }
    }

    /// Unweighted space-time `L²` norm: trapezoid in time, `dx^n` in space.
    pub fn l2_spacetime(&self) -> f64 {
        let vol = self.grid.cell_volume();
        let sum: f64 = self
            .slices
            .iter()
            .enumerate()
            .map(|(m, s)| {
                self.trapezoid_weight(m) * s.values().iter().map(|v| v.norm_sqr()).sum::<f64>()
            })
            .sum();
        (sum * self.dt * vol).sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid);
        assert_eq!(self.slices.len(), other.slices.len());
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.sub(b))
            .collect();
        Self {
            grid: self.grid,
            t0: self.t0,
            dt: self.dt,
            slices,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid);
        assert_eq!(self.slices.len(), other.slices.len());
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.add(b))
            .collect();
        Self {
            grid: self.grid,
            t0: self.t0,
            dt: self.dt,
            slices,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let slices = self.slices.iter().map(|s| s.scale(c)).collect();
        Self {
            grid: self.grid,
            t0: self.t0,
            dt: self.dt,
            slices,
        }
    }

    /// Restrict to every `stride`-th slice (used by resolution studies;
    /// slice 0 is always kept).
    pub fn subsample_time(&self, stride: usize) -> Self {
        assert!(stride >= 1);
        let slices: Vec<ComplexField> = self.slices.iter().step_by(stride).cloned().collect();
        Self {
            grid: self.grid,
            t0: self.t0,
            dt: self.dt * stride as f64,
            slices,
        }
    }
}
