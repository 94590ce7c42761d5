//! Decomposition of the inhomogeneous solution `u = ũ + R`:
//!
//! * `ũ` applies the space-time multiplier `1/(1+|ξ|² - (τ+iε)²)` to the
//!   source, on a zero-padded time window emulating the real line;
//! * `R` is the homogeneous flow launched from `(-ũ(0), -∂_t ũ(0))`, whose
//!   data reduce to explicit time integrals of the source against the
//!   `sin(tω)/ω` and `cos(tω)` kernels.
//!
//! Together they reproduce the causal Duhamel solution on the original
//! window; the dominant error is wrap-around of the time periodization,
//! which shrinks as the padding grows.

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::spectral::{forward_raw_inplace, inverse_raw_inplace, ComplexField, SpaceTimeField};

/// Relative level of field mass near the end of the padded window above
/// which wrap-around contamination is reported.
pub const WRAP_CONTAMINATION_THRESHOLD: f64 = 0.25;

#[derive(Debug, Error, PartialEq)]
pub enum DecompError {
    #[error("limiting absorption parameter must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("padding factor must be at least 2, got {0}")]
    BadPadFactor(usize),
    #[error("source must start at t = 0, got t0 = {0}")]
    TimeOriginNonzero(f64),
    #[error(
        "wrap-around contamination: mass near the end of the padded window is {ratio:.3} \
         of the peak (threshold {threshold})"
    )]
    WrapAround { ratio: f64, threshold: f64 },
}

/// `ũ` with the default 4x zero-padded window.
pub fn tilde_u(source: &SpaceTimeField, epsilon: f64) -> Result<SpaceTimeField, DecompError> {
    tilde_u_padded(source, epsilon, 4)
}

/// `ũ` on a `pad_factor`-times extended window. The discrete `τ` lattice is
/// `τ_j = 2π·j̃ / (pad_factor · T)` for signed `j̃`.
pub fn tilde_u_padded(
    source: &SpaceTimeField,
    epsilon: f64,
    pad_factor: usize,
) -> Result<SpaceTimeField, DecompError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(DecompError::BadEpsilon(epsilon));
    }
    if pad_factor < 2 {
        return Err(DecompError::BadPadFactor(pad_factor));
    }
    if source.t0() != 0.0 {
        return Err(DecompError::TimeOriginNonzero(source.t0()));
    }

    let grid = *source.grid();
    let count = grid.site_count();
    let steps = source.steps();
    let padded = pad_factor * steps;
    let dt = source.dt();
    let window = padded as f64 * dt;

    // spatial transform of every slice, zero-padded in time
    let mut spacetime = vec![Complex64::new(0.0, 0.0); padded * count];
    for (m, slice) in source.slices().iter().enumerate() {
        let seg = &mut spacetime[m * count..(m + 1) * count];
        seg.copy_from_slice(slice.values());
        forward_raw_inplace(&grid, seg);
    }

    let omega_sq: Vec<f64> = (0..count)
        .map(|i| {
            let xi = grid.frequency(i);
            1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
        })
        .collect();

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(padded);
    let inv = planner.plan_fft_inverse(padded);
    let mut series = vec![Complex64::new(0.0, 0.0); padded];
    let mut padded_mass = vec![0.0f64; padded];
    let tau_step = std::f64::consts::TAU / window; // 2π / window

    for site in 0..count {
        for j in 0..padded {
            series[j] = spacetime[j * count + site];
        }
        fwd.process(&mut series);
        for (j, v) in series.iter_mut().enumerate() {
            let signed = if j < padded / 2 {
                j as i64
            } else {
                j as i64 - padded as i64
            };
            let tau = Complex64::new(tau_step * signed as f64, epsilon);
            *v /= omega_sq[site] - tau * tau;
        }
        inv.process(&mut series);
        let scale = 1.0 / padded as f64;
        for j in 0..padded {
            let v = series[j] * scale;
            padded_mass[j] += v.norm_sqr();
            spacetime[j * count + site] = v;
        }
    }

    // contamination check: mass drifting toward the end of the padded
    // window wraps into the physical one
    let peak = padded_mass.iter().cloned().fold(0.0, f64::max);
    let tail_start = padded - padded / 8;
    let tail_peak = padded_mass[tail_start..]
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    if peak > 0.0 {
        let ratio = (tail_peak / peak).sqrt();
        if ratio > WRAP_CONTAMINATION_THRESHOLD {
            return Err(DecompError::WrapAround {
                ratio,
                threshold: WRAP_CONTAMINATION_THRESHOLD,
            });
        }
    }

    let slices: Vec<ComplexField> = (0..=steps)
        .map(|m| {
            let mut data = spacetime[m * count..(m + 1) * count].to_vec();
            inverse_raw_inplace(&grid, &mut data);
            ComplexField::new(grid, data).expect("multiplier keeps fields finite")
        })
        .collect();
    Ok(SpaceTimeField::new(0.0, dt, slices).expect("validated grid"))
}

/// The remainder `R`: homogeneous evolution of `(-ũ(0), -∂_tũ(0))`.
///
/// The anti-causal part satisfies `ũ(0) = ∫ sin(sω)/ω F(s) ds` and
/// `∂_tũ(0) = -∫ cos(sω) F(s) ds` over the source's support, so
/// `R(t) = -cos(tω) u₀ + sin(tω)/ω · c₀` with the two kernel integrals
/// `u₀ = ∫ sin(sω)/ω F ds` and `c₀ = ∫ cos(sω) F ds` (trapezoid in `s`).
pub fn remainder_field(source: &SpaceTimeField) -> Result<SpaceTimeField, DecompError> {
    if source.t0() != 0.0 {
        return Err(DecompError::TimeOriginNonzero(source.t0()));
    }
    let grid = *source.grid();
    let count = grid.site_count();
    let dt = source.dt();
    let omegas: Vec<f64> = (0..count)
        .map(|i| {
            let xi = grid.frequency(i);
            (1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
        })
        .collect();

    // time integrals against the two kernels, in spectral space
    let mut u0 = vec![Complex64::new(0.0, 0.0); count];
    let mut c0 = vec![Complex64::new(0.0, 0.0); count];
    let mut hat = vec![Complex64::new(0.0, 0.0); count];
    for (m, slice) in source.slices().iter().enumerate() {
        let t = source.time(m);
        let w_t = source.trapezoid_weight(m) * dt;
        hat.copy_from_slice(slice.values());
        forward_raw_inplace(&grid, &mut hat);
        for i in 0..count {
            let w = omegas[i];
            let (s, c) = (t * w).sin_cos();
            u0[i] += hat[i] * (w_t * s / w);
            c0[i] += hat[i] * (w_t * c);
        }
    }

    let slices: Vec<ComplexField> = (0..=source.steps())
        .map(|m| {
            let t = source.time(m);
            let mut data: Vec<Complex64> = (0..count)
                .map(|i| {
                    let w = omegas[i];
                    let (s, c) = (t * w).sin_cos();
                    -(u0[i] * c) + c0[i] * (s / w)
                })
                .collect();
            inverse_raw_inplace(&grid, &mut data);
            ComplexField::new(grid, data).expect("flow keeps fields finite")
        })
        .collect();
    Ok(SpaceTimeField::new(0.0, dt, slices).expect("validated grid"))
}
