//! Fourier multiplier operators `f -> (m(ξ) f̂(ξ))^∨`, and the two derivative
//! scales built from them: the Bessel operator `⟨∇⟩^s = (1-Δ)^{s/2}` with
//! symbol `(1+|ξ|²)^{s/2}`, and the homogeneous Riesz operator `|∇|^s` with
//! symbol `|ξ|^s`.

use num_complex::Complex64;
use thiserror::Error;

use super::fft::{forward_raw_inplace, inverse_raw_inplace};
use super::field::ComplexField;
use super::grid::Grid;

#[derive(Debug, Error, PartialEq)]
pub enum MultiplierError {
    #[error("symbol is not finite at lattice frequency {xi:?} (flat index {index}): {re}+{im}i")]
    NonFiniteSymbol {
        index: usize,
        xi: [f64; 3],
        re: f64,
        im: f64,
    },
    #[error("|∇|^s requires s >= 0 (the symbol is singular at ξ = 0), got s = {0}")]
    NegativeRieszOrder(f64),
}

pub(crate) fn apply_unchecked(
    f: &ComplexField,
    symbol: impl Fn([f64; 3]) -> Complex64,
) -> ComplexField {
    let grid = *f.grid();
    let mut data = f.values().to_vec();
    forward_raw_inplace(&grid, &mut data);
    for (flat, v) in data.iter_mut().enumerate() {
        *v *= symbol(grid.frequency(flat));
    }
    inverse_raw_inplace(&grid, &mut data);
    ComplexField::new(grid, data).expect("finite symbol keeps the field finite")
}

/// Apply a frequency symbol `m(ξ)` to a field. Rejects symbols that are not
/// finite somewhere on the frequency lattice, reporting the offending point.
pub fn apply_multiplier(
    f: &ComplexField,
    symbol: impl Fn([f64; 3]) -> Complex64,
) -> Result<ComplexField, MultiplierError> {
    let grid = *f.grid();
    for flat in 0..grid.site_count() {
        let xi = grid.frequency(flat);
        let m = symbol(xi);
        if !m.re.is_finite() || !m.im.is_finite() {
            return Err(MultiplierError::NonFiniteSymbol {
                index: flat,
                xi,
                re: m.re,
                im: m.im,
            });
        }
    }
    Ok(apply_unchecked(f, symbol))
}

pub(crate) fn bessel_symbol(xi: [f64; 3], s: f64) -> f64 {
    (1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).powf(0.5 * s)
}

/// `⟨∇⟩^s f` for any real `s`; total on valid fields since the symbol
/// `(1+|ξ|²)^{s/2}` never vanishes.
pub fn bessel_derivative(f: &ComplexField, s: f64) -> ComplexField {
    if s == 0.0 {
        return f.clone();
    }
    apply_unchecked(f, |xi| Complex64::new(bessel_symbol(xi, s), 0.0))
}

/// `|∇|^s f` for `s >= 0`, with the zero mode mapped to 0 for `s > 0`.
pub fn riesz_derivative(f: &ComplexField, s: f64) -> Result<ComplexField, MultiplierError> {
    if s < 0.0 {
        return Err(MultiplierError::NegativeRieszOrder(s));
    }
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(apply_unchecked(f, |xi| {
        let mag = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt();
        if mag == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(mag.powf(s), 0.0)
        }
    }))
}

/// Spectral gradient magnitude seminorm `‖ |∇| f ‖` pieces: returns
/// `Σ_k |ξ_k|² |f̂_k|²` (plain coefficient sum, no measure factor).
pub(crate) fn gradient_energy_sum(grid: &Grid, coeffs: &[Complex64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(flat, c)| {
            let xi = grid.frequency(flat);
            (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) * c.norm_sqr()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::fft::fourier_forward;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid {
        Grid::new(2, 4.0, 16).unwrap()
    }

    fn random_field(grid: Grid, seed: u64) -> ComplexField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.site_count())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexField::new(grid, values).unwrap()
    }

    fn lattice_wave(grid: Grid, k: [usize; 3]) -> (ComplexField, [f64; 3]) {
        let step = grid.freq_step();
        let mut xi = [0.0; 3];
        for a in 0..grid.dim() {
            xi[a] = step * grid.signed_index(k[a]) as f64;
        }
        let f = ComplexField::from_fn(grid, |x| {
            Complex64::new(0.0, x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2]).exp()
        });
        (f, xi)
    }

    fn rel_err(a: &ComplexField, b: &ComplexField) -> f64 {
        a.sub(b).ell2() / b.ell2().max(1e-300)
    }

    #[test]
    fn identity_symbol_is_identity() {
        let f = random_field(grid(), 1);
        let g = apply_multiplier(&f, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(rel_err(&g, &f) < 1e-12);
    }

    #[test]
    fn laplacian_symbol_on_lattice_wave() {
        let (f, xi) = lattice_wave(grid(), [3, 12, 0]);
        let lam = xi[0] * xi[0] + xi[1] * xi[1];
        let g = apply_multiplier(&f, |xi| {
            Complex64::new(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2], 0.0)
        })
        .unwrap();
        assert!(rel_err(&g, &f.scale(Complex64::new(lam, 0.0))) < 1e-11);
    }

    #[test]
    fn composition_matches_product_symbol() {
        let f = random_field(grid(), 2);
        let m1 = |xi: [f64; 3]| Complex64::new((xi[0]).cos(), 0.3 * xi[1]);
        let m2 = |xi: [f64; 3]| Complex64::new(1.0 / (1.0 + xi[0] * xi[0]), xi[1].sin());
        let two_pass = apply_multiplier(&apply_multiplier(&f, m1).unwrap(), m2).unwrap();
        let one_pass = apply_multiplier(&f, |xi| m1(xi) * m2(xi)).unwrap();
        assert!(rel_err(&two_pass, &one_pass) < 1e-12);
        let swapped = apply_multiplier(&apply_multiplier(&f, m2).unwrap(), m1).unwrap();
        assert!(rel_err(&swapped, &one_pass) < 1e-12);
    }

    #[test]
    fn non_finite_symbol_reports_offending_point() {
        let f = random_field(grid(), 3);
        // 1/|ξ|² is singular at the zero mode, which the lattice contains
        let err = apply_multiplier(&f, |xi| {
            Complex64::new(1.0 / (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]), 0.0)
        })
        .unwrap_err();
        match err {
            MultiplierError::NonFiniteSymbol { xi, .. } => assert_eq!(xi, [0.0, 0.0, 0.0]),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bessel_zero_order_is_identity_and_eigenvalue_correct() {
        let f = random_field(grid(), 4);
        assert!(rel_err(&bessel_derivative(&f, 0.0), &f) < 1e-15);

        let (w, xi) = lattice_wave(grid(), [5, 2, 0]);
        let lam = (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).powf(0.25);
        let g = bessel_derivative(&w, 0.5);
        assert!(rel_err(&g, &w.scale(Complex64::new(lam, 0.0))) < 1e-11);
    }

    #[test]
    fn bessel_inverse_cancels() {
        let f = random_field(grid(), 5);
        for s in [0.5, 1.0, 2.0] {
            let back = bessel_derivative(&bessel_derivative(&f, s), -s);
            assert!(rel_err(&back, &f) < 1e-11, "s = {s}");
        }
    }

    #[test]
    fn bessel_order_two_matches_finite_differences() {
        // (1-Δ)f against a second-order centered stencil on a smooth
        // periodized Gaussian (summing images keeps it C^∞ through the
        // box seam, so only the stencil truncation remains)
        let grid = Grid::new(3, 8.0, 64).unwrap();
        let span = 2.0 * grid.half_length();
        let f = ComplexField::from_fn(grid, |x| {
            let mut v = 0.0;
            for mx in -1..=1 {
                for my in -1..=1 {
                    for mz in -1..=1 {
                        let dx = x[0] - span * mx as f64;
                        let dy = x[1] - span * my as f64;
                        let dz = x[2] - span * mz as f64;
                        v += (-(dx * dx + dy * dy + dz * dz) / 18.0).exp();
                    }
                }
            }
            Complex64::new(v, 0.0)
        });
        let spectral = bessel_derivative(&f, 2.0);

        let n = grid.points();
        let dx2 = grid.dx() * grid.dx();
        let v = f.values();
        let mut fd = vec![Complex64::new(0.0, 0.0); v.len()];
        for flat in 0..v.len() {
            let idx = grid.multi_index(flat);
            let mut lap = Complex64::new(0.0, 0.0);
            for axis in 0..3 {
                let mut up = idx;
                up[axis] = (idx[axis] + 1) % n;
                let mut dn = idx;
                dn[axis] = (idx[axis] + n - 1) % n;
                lap += v[grid.flat_index(up)] + v[grid.flat_index(dn)] - 2.0 * v[flat];
            }
            fd[flat] = v[flat] - lap / dx2;
        }
        let fd = ComplexField::new(grid, fd).unwrap();
        assert!(rel_err(&spectral, &fd) < 1e-3);
    }

    #[test]
    fn riesz_edge_cases() {
        let g = grid();
        let f = random_field(g, 6);
        assert!(rel_err(&riesz_derivative(&f, 0.0).unwrap(), &f) < 1e-15);
        assert_eq!(
            riesz_derivative(&f, -0.5).unwrap_err(),
            MultiplierError::NegativeRieszOrder(-0.5)
        );

        // constant field is pure zero mode: |∇|^s kills it
        let c = ComplexField::constant(g, Complex64::new(3.0, 1.0));
        assert!(riesz_derivative(&c, 0.5).unwrap().ell2() < 1e-12);

        let (w, xi) = lattice_wave(g, [4, 0, 0]);
        let lam = (xi[0] * xi[0]).sqrt().powf(0.5);
        let out = riesz_derivative(&w, 0.5).unwrap();
        assert!(rel_err(&out, &w.scale(Complex64::new(lam, 0.0))) < 1e-11);
    }

    #[test]
    fn parseval_with_physical_measure() {
        let f = random_field(grid(), 8);
        let hat = fourier_forward(&f);
        assert!((hat.ell2() - f.ell2()).abs() <= 1e-12 * f.ell2());
    }

    #[test]
    fn refinement_consistency_of_bessel_half() {
        // same smooth Gaussian sampled at N and 2N: ⟨∇⟩^{1/2}f agrees at
        // coincident points
        let coarse = Grid::new(3, 8.0, 32).unwrap();
        let fine = Grid::new(3, 8.0, 64).unwrap();
        let gauss = |x: [f64; 3]| {
            Complex64::new(
                (-(x[0].powi(2) + x[1].powi(2) + x[2].powi(2)) / 2.0).exp(),
                0.0,
            )
        };
        let a = bessel_derivative(&ComplexField::from_fn(coarse, gauss), 0.5);
        let b = bessel_derivative(&ComplexField::from_fn(fine, gauss), 0.5);
        let mut num = 0.0;
        let mut den = 0.0;
        for flat in 0..coarse.site_count() {
            let idx = coarse.multi_index(flat);
            let fine_flat = fine.flat_index([idx[0] * 2, idx[1] * 2, idx[2] * 2]);
            num += (a.values()[flat] - b.values()[fine_flat]).norm_sqr();
            den += b.values()[fine_flat].norm_sqr();
        }
        assert!((num / den).sqrt() < 1e-6);
    }
}
