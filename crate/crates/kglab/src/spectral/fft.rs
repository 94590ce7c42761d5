//! The transform engine behind every multiplier: n-dimensional FFTs built
//! from 1-d passes, with the unitary normalization and the lattice phase
//! that realizes `f̂(ξ_k) = N^{-n/2} Σ_j f(x_j) e^{-i x_j·ξ_k}` on the box
//! `[-L, L)^n` (sites start at `-L`, hence a checkerboard sign per axis).

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::field::{ComplexField, SpectralField};
use super::grid::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_pass(grid: &Grid, data: &mut [Complex64], forward: bool) {
    let n = grid.points();
    let total = grid.site_count();
    let fft = PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if forward {
            planner.plan_fft_forward(n)
        } else {
            planner.plan_fft_inverse(n)
        }
    });
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..grid.dim() {
        let inner: usize = n.pow((grid.dim() - 1 - axis) as u32);
        if inner == 1 {
            // contiguous lines
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = n * inner;
        for base_block in (0..total).step_by(block) {
            for offset in 0..inner {
                let base = base_block + offset;
                for k in 0..n {
                    line[k] = data[base + k * inner];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for k in 0..n {
                    data[base + k * inner] = line[k];
                }
            }
        }
    }
}

/// Unnormalized analysis transform along every axis (plain DFT sums).
pub(crate) fn forward_raw_inplace(grid: &Grid, data: &mut [Complex64]) {
    fft_pass(grid, data, true);
}

/// Synthesis transform scaled by `N^{-n}`, the exact inverse of
/// [`forward_raw_inplace`].
pub(crate) fn inverse_raw_inplace(grid: &Grid, data: &mut [Complex64]) {
    fft_pass(grid, data, false);
    let scale = 1.0 / grid.site_count() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// `(-1)^(j_1 + ... + j_n)` per site: the phase relating DFT indices to the
/// box origin at `-L`. Involutive, and identical on both sides of the
/// transform, so it cancels inside pure multiplier applications.
fn apply_checkerboard(grid: &Grid, data: &mut [Complex64]) {
    for (flat, v) in data.iter_mut().enumerate() {
        let idx = grid.multi_index(flat);
        let parity = (idx[0] + idx[1] + idx[2]) & 1;
        if parity == 1 {
            *v = -*v;
        }
    }
}

/// Unitary forward transform: `f̂(ξ_k) = N^{-n/2} Σ_j f(x_j) e^{-i x_j·ξ_k}`.
///
/// Plancherel holds exactly up to roundoff: `‖f̂‖₂ = ‖f‖₂` in the plain
/// vector 2-norm.
pub fn fourier_forward(f: &ComplexField) -> SpectralField {
    let grid = *f.grid();
    let mut data = f.values().to_vec();
    forward_raw_inplace(&grid, &mut data);
    let scale = 1.0 / (grid.site_count() as f64).sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
    apply_checkerboard(&grid, &mut data);
    SpectralField::from_parts(grid, data)
}

/// Unitary inverse transform, `f(x_j) = N^{-n/2} Σ_k f̂(ξ_k) e^{i x_j·ξ_k}`.
pub fn fourier_inverse(f: &SpectralField) -> ComplexField {
    let grid = *f.grid();
    let mut data = f.coefficients().to_vec();
    apply_checkerboard(&grid, &mut data);
    fft_pass(&grid, &mut data, false);
    let scale = 1.0 / (grid.site_count() as f64).sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
    ComplexField::new(grid, data).expect("transform preserves finiteness")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid, seed: u64) -> ComplexField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.site_count())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexField::new(grid, values).unwrap()
    }

    #[test]
    fn constant_field_concentrates_on_zero_mode() {
        let grid = Grid::new(3, 8.0, 8).unwrap();
        let c = Complex64::new(2.0, -1.0);
        let f = ComplexField::constant(grid, c);
        let hat = fourier_forward(&f);
        let zero = grid.flat_index([0, 0, 0]);
        for (flat, v) in hat.coefficients().iter().enumerate() {
            if flat == zero {
                // N^{n/2} * c
                let expected = c * (grid.site_count() as f64).sqrt();
                assert!((v - expected).norm() < 1e-10);
            } else {
                assert!(v.norm() < 1e-10, "leak at index {flat}");
            }
        }
    }

    #[test]
    fn lattice_wave_hits_single_coefficient() {
        let grid = Grid::new(2, 4.0, 16).unwrap();
        // pick a mode with one negative component
        let target = [3usize, 14usize, 0];
        let xi = {
            let step = grid.freq_step();
            [step * 3.0, step * (14.0 - 16.0), 0.0]
        };
        let f = ComplexField::from_fn(grid, |x| {
            Complex64::new(0.0, x[0] * xi[0] + x[1] * xi[1]).exp()
        });
        let hat = fourier_forward(&f);
        let flat = grid.flat_index(target);
        let expected = (grid.site_count() as f64).sqrt();
        assert!((hat.coefficients()[flat] - expected).norm() < 1e-9);
        let leak: f64 = hat
            .coefficients()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != flat)
            .map(|(_, v)| v.norm_sqr())
            .sum();
        assert!(leak.sqrt() < 1e-9);
    }

    #[test]
    fn unitarity_on_random_fields() {
        for (dim, points, seed) in [(1, 64, 1), (2, 16, 2), (3, 8, 3)] {
            let grid = Grid::new(dim, 5.0, points).unwrap();
            let f = random_field(grid, seed);
            let hat = fourier_forward(&f);
            let ratio = hat.ell2() / f.ell2();
            assert!((ratio - 1.0).abs() < 1e-12, "dim {dim}: ratio {ratio}");
        }
    }

    #[test]
    fn round_trip_reproduces_field() {
        let grid = Grid::new(3, 16.0, 16).unwrap();
        let f = random_field(grid, 7);
        let back = fourier_inverse(&fourier_forward(&f));
        let err: f64 = f
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err / f.ell2() < 1e-12);
    }
}
