use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Periodic lattice on the box `[-L, L)^n`: the discretization contract
/// shared by all fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    half_length: f64,
    points: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("dimension must be 1, 2 or 3, got {0}")]
    BadDimension(usize),
    #[error("box half-length must be positive and finite, got {0}")]
    BadHalfLength(f64),
    #[error("points per axis must be a power of two >= 2, got {0}")]
    BadPointCount(usize),
}

impl Grid {
    pub fn new(dim: usize, half_length: f64, points: usize) -> Result<Self, GridError> {
        if !(1..=3).contains(&dim) {
            return Err(GridError::BadDimension(dim));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(GridError::BadHalfLength(half_length));
        }
        if points < 2 || !points.is_power_of_two() {
            return Err(GridError::BadPointCount(points));
        }
        Ok(Self {
            dim,
            half_length,
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Box half-length `L`; the domain is `[-L, L)^n`.
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    /// Points per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Lattice spacing `dx = 2L/N`.
    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    /// Cell volume `dx^n`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Total number of lattice sites `N^n`.
    pub fn site_count(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    /// Frequency lattice spacing `π/L`.
    pub fn freq_step(&self) -> f64 {
        PI / self.half_length
    }

    /// Largest representable frequency magnitude per axis, `π/L · N/2`.
    pub fn max_frequency(&self) -> f64 {
        self.freq_step() * (self.points / 2) as f64
    }

    /// Decompose a flat (row-major) index into per-axis indices.
    /// Unused axes report 0.
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        debug_assert!(flat < self.site_count());
        let n = self.points;
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            idx[axis] = rest % n;
            rest /= n;
        }
        idx
    }

    pub fn flat_index(&self, idx: [usize; 3]) -> usize {
        let n = self.points;
        let mut flat = 0usize;
        for axis in 0..self.dim {
            debug_assert!(idx[axis] < n);
            flat = flat * n + idx[axis];
        }
        flat
    }

    /// Physical coordinates of a lattice site, `x_j = -L + j·dx`.
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let dx = self.dx();
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = -self.half_length + idx[axis] as f64 * dx;
        }
        x
    }

    /// Signed integer frequency index for an unsigned lattice index:
    /// `j -> j` for `j < N/2`, else `j - N`.
    pub fn signed_index(&self, j: usize) -> i64 {
        if j < self.points / 2 {
            j as i64
        } else {
            j as i64 - self.points as i64
        }
    }

    /// Frequency vector `ξ_k` of a flat index into a spectral field.
    pub fn frequency(&self, flat: usize) -> [f64; 3] {
        let idx = self.multi_index(flat);
        let step = self.freq_step();
        let mut xi = [0.0; 3];
        for axis in 0..self.dim {
            xi[axis] = step * self.signed_index(idx[axis]) as f64;
        }
        xi
    }

    /// Distance from `x` to the nearest periodic image of `y`.
    pub fn periodic_distance(&self, x: [f64; 3], y: [f64; 3]) -> f64 {
        let span = 2.0 * self.half_length;
        let mut sq = 0.0;
        for axis in 0..self.dim {
            let mut d = (x[axis] - y[axis]).abs() % span;
            if d > self.half_length {
                d = span - d;
            }
            sq += d * d;
        }
        sq.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_parameters() {
        assert!(Grid::new(3, 16.0, 32).is_ok());
        assert_eq!(Grid::new(0, 16.0, 32), Err(GridError::BadDimension(0)));
        assert_eq!(Grid::new(4, 16.0, 32), Err(GridError::BadDimension(4)));
        assert_eq!(Grid::new(3, -1.0, 32), Err(GridError::BadHalfLength(-1.0)));
        assert_eq!(Grid::new(3, 16.0, 24), Err(GridError::BadPointCount(24)));
        assert_eq!(Grid::new(3, 16.0, 1), Err(GridError::BadPointCount(1)));
    }

    #[test]
    fn spacing_times_points_is_box_size() {
        let g = Grid::new(3, 16.0, 32).unwrap();
        assert!((g.dx() * g.points() as f64 - 2.0 * g.half_length()).abs() < 1e-14);
    }

    #[test]
    fn frequency_lattice_is_symmetric_except_nyquist() {
        let g = Grid::new(1, 8.0, 16).unwrap();
        let signed: Vec<i64> = (0..16).map(|j| g.signed_index(j)).collect();
        for k in 1..8 {
            assert!(signed.contains(&k) && signed.contains(&-k));
        }
        assert!(signed.contains(&-8));
        assert!(!signed.contains(&8));
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(3, 4.0, 8).unwrap();
        for flat in [0, 1, 7, 8, 100, 511] {
            assert_eq!(g.flat_index(g.multi_index(flat)), flat);
        }
    }

    #[test]
    fn origin_is_a_lattice_site() {
        let g = Grid::new(3, 16.0, 32).unwrap();
        let center = g.flat_index([16, 16, 16]);
        let x = g.position(center);
        assert_eq!(x, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn periodic_distance_wraps() {
        let g = Grid::new(1, 8.0, 16).unwrap();
        // sites at -8 and 7.5 are 0.5 apart through the seam
        assert!((g.periodic_distance([-8.0, 0.0, 0.0], [7.5, 0.0, 0.0]) - 0.5).abs() < 1e-12);
        assert!((g.periodic_distance([1.0, 0.0, 0.0], [3.0, 0.0, 0.0]) - 2.0).abs() < 1e-12);
    }
}
