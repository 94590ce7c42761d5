//! Sphere densities, the extension operator `d ↦ (d dσ_r)^∧` and the
//! trace/restriction diagnostics built on it.
//!
//! Quadrature on the sphere of radius `r` is product Gauss-Legendre in the
//! polar cosine times uniform azimuth; the node count must resolve the
//! phase oscillation `r·|x|` over the targets of interest.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use super::quadrature::gauss_legendre;
use crate::ball::BallStencil;
use crate::potential::{dyadic_radii, fp_norm, Potential, PotentialError};
use crate::spectral::{ComplexField, Grid};

#[derive(Debug, Error, PartialEq)]
pub enum SphereError {
    #[error("sphere radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("need at least 2 polar and 4 azimuthal nodes, got {polar} x {azimuth}")]
    TooFewNodes { polar: usize, azimuth: usize },
}

/// A square-integrable density on a sphere of radius `r`, sampled on a
/// quadrature grid with positive weights summing to the sphere area.
#[derive(Debug, Clone)]
pub struct SphereDensity {
    radius: f64,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    values: Vec<Complex64>,
}

impl SphereDensity {
    /// Sample a density function on a `n_polar x n_azimuth` product grid.
    pub fn from_fn(
        radius: f64,
        n_polar: usize,
        n_azimuth: usize,
        density: impl Fn([f64; 3]) -> Complex64,
    ) -> Result<Self, SphereError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(SphereError::BadRadius(radius));
        }
        if n_polar < 2 || n_azimuth < 4 {
            return Err(SphereError::TooFewNodes {
                polar: n_polar,
                azimuth: n_azimuth,
            });
        }
        let (cos_nodes, cos_weights) = gauss_legendre(n_polar);
        let mut nodes = Vec::with_capacity(n_polar * n_azimuth);
        let mut weights = Vec::with_capacity(n_polar * n_azimuth);
        let mut values = Vec::with_capacity(n_polar * n_azimuth);
        let dphi = std::f64::consts::TAU / n_azimuth as f64;
        for (mu, w_mu) in cos_nodes.iter().zip(&cos_weights) {
            let sin_theta = (1.0 - mu * mu).sqrt();
            for j in 0..n_azimuth {
                let phi = dphi * j as f64;
                let node = [
                    radius * sin_theta * phi.cos(),
                    radius * sin_theta * phi.sin(),
                    radius * mu,
                ];
                nodes.push(node);
                weights.push(w_mu * dphi * radius * radius);
                values.push(density(node));
            }
        }
        Ok(Self {
            radius,
            nodes,
            weights,
            values,
        })
    }

    /// Constant density `d ≡ value`.
    pub fn constant(
        radius: f64,
        n_polar: usize,
        n_azimuth: usize,
        value: Complex64,
    ) -> Result<Self, SphereError> {
        Self::from_fn(radius, n_polar, n_azimuth, |_| value)
    }

    /// Node counts resolving phases up to `r·R_max` over a grid, capped at
    /// 10⁴ total nodes.
    pub fn suggested_nodes(radius: f64, grid: &Grid) -> (usize, usize) {
        let reach = radius * grid.half_length() * (grid.dim() as f64).sqrt();
        let polar = ((0.75 * reach).ceil() as usize + 12).max(16);
        let azimuth = 2 * polar;
        if polar * azimuth > 10_000 {
            let polar = ((10_000 / 2) as f64).sqrt() as usize;
            (polar, 2 * polar)
        } else {
            (polar, azimuth)
        }
    }

    /// Whether the node count resolves targets out to `max_target_radius`.
    pub fn resolves_band(&self, max_target_radius: f64) -> bool {
        let n_polar = self.polar_count();
        (n_polar as f64) >= 0.75 * self.radius * max_target_radius + 8.0
    }

    fn polar_count(&self) -> usize {
        // nodes are stored polar-major with a fixed azimuth count
        let mut azimuth = 0usize;
        let first_mu = self.nodes[0][2];
        while azimuth < self.nodes.len() && (self.nodes[azimuth][2] - first_mu).abs() < 1e-12 {
            azimuth += 1;
        }
        self.nodes.len() / azimuth
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Total quadrature weight; equals the sphere area `4πr²` by
    /// construction.
    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `‖d‖_{L²(dσ)}`.
    pub fn density_l2(&self) -> f64 {
        self.weights
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// The extension operator at arbitrary targets:
/// `g(x) = Σ_nodes w·d(ω)·e^{ix·ω}`.
pub fn sphere_extension(d: &SphereDensity, targets: &[[f64; 3]]) -> Vec<Complex64> {
    targets
        .par_iter()
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((node, w), v) in d.nodes.iter().zip(&d.weights).zip(&d.values) {
                let phase = x[0] * node[0] + x[1] * node[1] + x[2] * node[2];
                acc += v * w * Complex64::new(0.0, phase).exp();
            }
            acc
        })
        .collect()
}

/// The extension evaluated on every lattice site of a grid.
pub fn sphere_extension_field(d: &SphereDensity, grid: Grid) -> ComplexField {
    let targets: Vec<[f64; 3]> = (0..grid.site_count()).map(|i| grid.position(i)).collect();
    let values = sphere_extension(d, &targets);
    ComplexField::new(grid, values).expect("finite sums")
}

/// Trace ratios `∫_{|x|<R} |g|² dx / (R ∫ |d|² dσ)` of an extension field
/// over a family of ball radii.
pub fn trace_ratios(
    extension: &ComplexField,
    d: &SphereDensity,
    ball_radii: &[f64],
) -> Vec<(f64, f64)> {
    let grid = extension.grid();
    let intensity: Vec<f64> = extension.values().iter().map(|v| v.norm_sqr()).collect();
    let origin = {
        let mut idx = [0usize; 3];
        for a in 0..grid.dim() {
            idx[a] = grid.points() / 2;
        }
        idx
    };
    let denom_density = d.density_l2().powi(2);
    ball_radii
        .iter()
        .map(|&radius| {
            let st = BallStencil::build(grid, radius);
            let mass = st.sum_at(grid, &intensity, origin) * grid.cell_volume();
            (radius, mass / (radius * denom_density))
        })
        .collect()
}

/// Weighted restriction ratio
/// `‖(d dσ)^∧‖_{L²(|V|)} / (‖V‖^{1/2} ‖d‖_{L²(dσ)})` over the box, with the
/// Fefferman-Phong norm estimated by the default scan.
pub fn weighted_restriction_check(
    d: &SphereDensity,
    v: &Potential,
    p: f64,
) -> Result<f64, PotentialError> {
    let fp = fp_norm(v, p, 4, &dyadic_radii(v.grid()))?;
    Ok(weighted_restriction_ratio(d, v, fp.value))
}

/// Same ratio with a precomputed Fefferman-Phong norm value (for scans that
/// reuse one potential).
pub fn weighted_restriction_ratio(d: &SphereDensity, v: &Potential, fp_value: f64) -> f64 {
    let grid = *v.grid();
    let g = sphere_extension_field(d, grid);
    let weight = v.weight();
    let num_sq: f64 = g
        .values()
        .iter()
        .zip(&weight)
        .map(|(gv, w)| gv.norm_sqr() * w)
        .sum::<f64>()
        * grid.cell_volume();
    num_sq.sqrt() / (fp_value.sqrt() * d.density_l2())
}
