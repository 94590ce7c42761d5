//! The free resolvent `R(z) = (-Δ - z)^{-1}` as a Fourier multiplier, the
//! limiting-absorption contour kernel, the space-time decomposition
//! `u = ũ + R` of inhomogeneous solutions, and sphere extension/trace
//! diagnostics.

mod contour;
mod decomp;
mod quadrature;
mod sphere;

use std::io::Write;

use num_complex::Complex64;
use thiserror::Error;

pub use contour::{contour_kernel, retarded_kernel, ContourError, ContourKernel, TAIL_TOLERANCE};
pub use decomp::{
    remainder_field, tilde_u, tilde_u_padded, DecompError, WRAP_CONTAMINATION_THRESHOLD,
};
pub use sphere::{
    sphere_extension, sphere_extension_field, trace_ratios, weighted_restriction_check,
    weighted_restriction_ratio, SphereDensity, SphereError,
};

use crate::norms::{riesz_windowed_mass, weighted_l2_field, NormError, Weight};
use crate::potential::Potential;
use crate::spectral::{apply_unchecked, ComplexField};

#[derive(Debug, Error, PartialEq)]
pub enum ResolventError {
    #[error("spectral parameter must have nonzero imaginary part (got z = {re}+{im}i)")]
    RealSpectralParameter { re: f64, im: f64 },
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// `R(z) f` with symbol `1/(|ξ|² - z)`, defined off the real axis.
pub fn resolvent_apply(f: &ComplexField, z: Complex64) -> Result<ComplexField, ResolventError> {
    if z.im == 0.0 {
        return Err(ResolventError::RealSpectralParameter { re: z.re, im: z.im });
    }
    Ok(apply_unchecked(f, |xi| {
        let mag_sq = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        1.0 / (Complex64::new(mag_sq, 0.0) - z)
    }))
}

/// One point of a `z`-sweep: the two weighted ratios whose uniform
/// boundedness in `z` is the content of the resolvent estimates.
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub z: Complex64,
    /// `‖R(z)f‖_{L²(|V|)} / (‖V‖ · ‖f‖_{L²(|V|⁻¹)})`
    pub weighted_ratio: f64,
    /// `sup_{x0,R} (1/R)∫_{|x-x0|<R} ||∇|^{1/2} R(z)f|² dx / (‖V‖ · ‖f‖²_{L²(|V|⁻¹)})`
    pub smoothing_ratio: f64,
}

/// Sweep the resolvent ratios over a rectangular `z`-grid.
#[allow(clippy::too_many_arguments)]
pub fn resolvent_sweep(
    f: &ComplexField,
    v: &Potential,
    fp_value: f64,
    re_values: &[f64],
    im_values: &[f64],
    center_stride: usize,
    radii: &[f64],
) -> Result<Vec<SweepPoint>, ResolventError> {
    let f_weighted_inv = weighted_l2_field(f, v, Weight::Inverse)?;
    let mut out = Vec::with_capacity(re_values.len() * im_values.len());
    for &re in re_values {
        for &im in im_values {
            let z = Complex64::new(re, im);
            let u = resolvent_apply(f, z)?;
            let weighted = weighted_l2_field(&u, v, Weight::Direct)?;
            let weighted_ratio = weighted / (fp_value * f_weighted_inv);
            let (mass, _) = riesz_windowed_mass(&u, 0.5, center_stride, radii)?;
            let smoothing_ratio = mass / (fp_value * f_weighted_inv * f_weighted_inv);
            out.push(SweepPoint {
                z,
                weighted_ratio,
                smoothing_ratio,
            });
        }
    }
    Ok(out)
}

/// CSV report of a sweep: `re_z,im_z,ratio_wl2,ratio_ls`.
pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], mut w: W) -> std::io::Result<()> {
    writeln!(w, "re_z,im_z,ratio_wl2,ratio_ls")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{}",
            p.z.re, p.z.im, p.weighted_ratio, p.smoothing_ratio
        )?;
    }
    Ok(())
}
