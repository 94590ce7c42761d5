//! Potential families and the numerical Fefferman-Phong norm
//! `‖V‖ = sup_{x,r} r^{2-n/p} (∫_{|y-x|<r} |V|^p dy)^{1/p}`, estimated by
//! scanning lattice centers and dyadic radii. The scan is a lower bound of
//! the true supremum; refining the scan never decreases it.

use num_complex::Complex64;
use thiserror::Error;

use crate::ball::scan_ball_max;
use crate::spectral::{forward_raw_inplace, ComplexField, Grid};

/// Singularities are capped below this many lattice spacings by default.
pub const DEFAULT_CORE_CELLS: f64 = 2.0;

/// Floor for `|log r|` in the log-corrected family, keeping the profile
/// finite through `r = 1`.
const LOG_FLOOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialFamily {
    /// `a / max(|x|, core_radius)²` with `|x|` the distance to the nearest
    /// periodic image of the origin.
    InverseSquare { coupling: f64, core_radius: f64 },
    /// `a · r^{-2} · max(|log r|, 1/2)^{-(1+log_exponent)}` for `r <= 1`,
    /// decaying like `r^{-(2+tail_exponent)}` times the same log factor
    /// beyond `r = 1`; the singular core is capped at two lattice spacings.
    DAnconaLog {
        coupling: f64,
        tail_exponent: f64,
        log_exponent: f64,
    },
    /// `a · exp(-|x|²/width²)`.
    GaussianBump { coupling: f64, width: f64 },
    /// Arbitrary user-supplied real field.
    Custom,
}

impl PotentialFamily {
    /// Radial profile of the family at distance `r` from the origin, with
    /// the core cap expressed in units of the lattice spacing `dx`.
    pub fn radial_profile(&self, r: f64, dx: f64) -> f64 {
        match *self {
            PotentialFamily::InverseSquare {
                coupling,
                core_radius,
            } => {
                let rc = r.max(core_radius);
                coupling / (rc * rc)
            }
            PotentialFamily::DAnconaLog {
                coupling,
                tail_exponent,
                log_exponent,
            } => {
                let rc = r.max(DEFAULT_CORE_CELLS * dx);
                let log_factor = rc.ln().abs().max(LOG_FLOOR).powf(-(1.0 + log_exponent));
                if rc <= 1.0 {
                    coupling * rc.powi(-2) * log_factor
                } else {
                    coupling * rc.powf(-(2.0 + tail_exponent)) * log_factor
                }
            }
            PotentialFamily::GaussianBump { coupling, width } => {
                coupling * (-(r * r) / (width * width)).exp()
            }
            PotentialFamily::Custom => f64::NAN,
        }
    }
}

/// A real potential sampled on a grid, with its family metadata and the
/// Fefferman-Phong exponent used for its norm.
#[derive(Debug, Clone)]
pub struct Potential {
    field: ComplexField,
    family: PotentialFamily,
    fp_exponent: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    #[error("core radius {got} is below half a lattice spacing {min} (sub-grid regularization)")]
    CoreTooSmall { got: f64, min: f64 },
    #[error("family parameter {name} must be positive and finite, got {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("potential field must be real, found imaginary part {im} at site {site}")]
    NotReal { site: usize, im: f64 },
    #[error(
        "exponent p = {p} outside the Fefferman-Phong range [1, n/2] = [1, {max}] for n = {n}"
    )]
    ExponentOutOfRange { p: f64, n: usize, max: f64 },
    #[error("radius {0} outside the resolvable range [2dx, L]")]
    RadiusOutOfRange(f64),
    #[error("no radii supplied")]
    NoRadii,
    #[error("scale factor must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("the Custom family has no generating formula; use Potential::from_field")]
    CustomHasNoFormula,
}

impl Potential {
    pub fn field(&self) -> &ComplexField {
        &self.field
    }

    pub fn grid(&self) -> &Grid {
        self.field.grid()
    }

    pub fn family(&self) -> PotentialFamily {
        self.family
    }

    pub fn fp_exponent(&self) -> f64 {
        self.fp_exponent
    }

    /// `|V|` sampled per site.
    pub fn weight(&self) -> Vec<f64> {
        self.field.values().iter().map(|v| v.re.abs()).collect()
    }

    /// Wrap an arbitrary real field as a `Custom` potential.
    pub fn from_field(field: ComplexField, fp_exponent: f64) -> Result<Self, PotentialError> {
        if let Some((site, v)) = field.values().iter().enumerate().find(|(_, v)| v.im != 0.0) {
            return Err(PotentialError::NotReal { site, im: v.im });
        }
        Ok(Self {
            field,
            family: PotentialFamily::Custom,
            fp_exponent,
        })
    }

    /// Same potential with every sample multiplied by `c`.
    pub fn rescaled(&self, c: f64) -> Self {
        let field = self.field.scale(Complex64::new(c, 0.0));
        let family = match self.family {
            PotentialFamily::InverseSquare {
                coupling,
                core_radius,
            } => PotentialFamily::InverseSquare {
                coupling: coupling * c,
                core_radius,
            },
            PotentialFamily::DAnconaLog {
                coupling,
                tail_exponent,
                log_exponent,
            } => PotentialFamily::DAnconaLog {
                coupling: coupling * c,
                tail_exponent,
                log_exponent,
            },
            PotentialFamily::GaussianBump { coupling, width } => PotentialFamily::GaussianBump {
                coupling: coupling * c,
                width,
            },
            PotentialFamily::Custom => PotentialFamily::Custom,
        };
        Self {
            field,
            family,
            fp_exponent: self.fp_exponent,
        }
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), PotentialError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(PotentialError::BadParameter { name, value });
    }
    Ok(())
}

/// Sample a potential family on a grid.
pub fn make_potential(
    family: PotentialFamily,
    grid: Grid,
    fp_exponent: f64,
) -> Result<Potential, PotentialError> {
    let dx = grid.dx();
    match family {
        PotentialFamily::InverseSquare {
            coupling,
            core_radius,
        } => {
            if !coupling.is_finite() {
                return Err(PotentialError::BadParameter {
                    name: "coupling",
                    value: coupling,
                });
            }
            if core_radius < 0.5 * dx {
                return Err(PotentialError::CoreTooSmall {
                    got: core_radius,
                    min: 0.5 * dx,
                });
            }
        }
        PotentialFamily::DAnconaLog {
            coupling,
            tail_exponent,
            log_exponent,
        } => {
            if !coupling.is_finite() {
                return Err(PotentialError::BadParameter {
                    name: "coupling",
                    value: coupling,
                });
            }
            check_positive("tail_exponent", tail_exponent)?;
            check_positive("log_exponent", log_exponent)?;
        }
        PotentialFamily::GaussianBump { coupling, width } => {
            if !coupling.is_finite() {
                return Err(PotentialError::BadParameter {
                    name: "coupling",
                    value: coupling,
                });
            }
            check_positive("width", width)?;
        }
        PotentialFamily::Custom => return Err(PotentialError::CustomHasNoFormula),
    }
    let origin = [0.0; 3];
    let field = ComplexField::from_fn(grid, |x| {
        let r = grid.periodic_distance(x, origin);
        Complex64::new(family.radial_profile(r, dx), 0.0)
    });
    Ok(Potential {
        field,
        family,
        fp_exponent,
    })
}

/// Result of a Fefferman-Phong norm scan.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FpNormEstimate {
    pub exponent: f64,
    pub value: f64,
    pub argmax_center: [f64; 3],
    pub argmax_center_index: [usize; 3],
    pub argmax_radius: f64,
    pub centers_scanned: usize,
    pub radii_scanned: usize,
    /// The maximizer sat on the smallest or largest scanned radius: the
    /// supremum may not be captured.
    pub sup_at_radius_boundary: bool,
}

/// Dyadic radii `{2dx, 4dx, ...}` up to the box half-length.
pub fn dyadic_radii(grid: &Grid) -> Vec<f64> {
    let mut radii = Vec::new();
    let mut r = 2.0 * grid.dx();
    while r <= grid.half_length() * (1.0 + 1e-12) {
        radii.push(r);
        r *= 2.0;
    }
    radii
}

/// Estimate `‖V‖` over every `center_stride`-th lattice center and the
/// given radii. The reported value is a lower bound of the true supremum.
pub fn fp_norm(
    v: &Potential,
    p: f64,
    center_stride: usize,
    radii: &[f64],
) -> Result<FpNormEstimate, PotentialError> {
    let grid = v.grid();
    let n = grid.dim();
    let max_p = n as f64 / 2.0;
    if !(p.is_finite() && p >= 1.0 && p <= max_p) {
        return Err(PotentialError::ExponentOutOfRange { p, n, max: max_p });
    }
    if radii.is_empty() {
        return Err(PotentialError::NoRadii);
    }
    let lo = 2.0 * grid.dx() * (1.0 - 1e-12);
    let hi = grid.half_length() * (1.0 + 1e-12);
    if let Some(&r) = radii.iter().find(|&&r| r < lo || r > hi) {
        return Err(PotentialError::RadiusOutOfRange(r));
    }

    let mut sorted = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let powered: Vec<f64> = v
        .field
        .values()
        .iter()
        .map(|v| v.re.abs().powf(p))
        .collect();
    let shape_exp = 2.0 - n as f64 / p;
    let hit = scan_ball_max(&powered, grid, center_stride, &sorted, |r, integral| {
        r.powf(shape_exp) * integral.powf(1.0 / p)
    });

    let centers_per_axis = grid.points().div_ceil(center_stride);
    Ok(FpNormEstimate {
        exponent: p,
        value: hit.value,
        argmax_center: {
            let flat = grid.flat_index(hit.center_index);
            grid.position(flat)
        },
        argmax_center_index: hit.center_index,
        argmax_radius: hit.radius,
        centers_scanned: centers_per_axis.pow(n as u32),
        radii_scanned: sorted.len(),
        sup_at_radius_boundary: hit.radius_rank == 0 || hit.radius_rank == sorted.len() - 1,
    })
}

/// A rescaled potential `x -> λ² V(λx)` together with its resampling
/// diagnostics. The Fefferman-Phong norm is invariant under this map in the
/// continuum.
#[derive(Debug, Clone)]
pub struct ScaledPotential {
    pub potential: Potential,
    /// `λ > 1` compresses features below the lattice resolution.
    pub aliasing_warning: bool,
}

/// Resample `λ² V(λx)` by evaluating the trigonometric interpolant of the
/// samples at the scaled points (separable per-axis synthesis).
pub fn scale_potential(v: &Potential, lambda: f64) -> Result<ScaledPotential, PotentialError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(PotentialError::BadScale(lambda));
    }
    if lambda == 1.0 {
        return Ok(ScaledPotential {
            potential: v.clone(),
            aliasing_warning: false,
        });
    }
    let grid = *v.grid();
    let n = grid.points();
    let dim = grid.dim();
    let total = grid.site_count();
    let half = grid.half_length();
    let step = grid.freq_step();

    let mut data = v.field.values().to_vec();
    forward_raw_inplace(&grid, &mut data);

    // synthesis matrix e^{i ξ_k (λ x_j + L)} / N, shared by all axes
    let mut synth = vec![Complex64::new(0.0, 0.0); n * n];
    let dx = grid.dx();
    for j in 0..n {
        let y = lambda * (-half + j as f64 * dx) + half;
        for k in 0..n {
            let xi = step * grid.signed_index(k) as f64;
            synth[j * n + k] = Complex64::new(0.0, xi * y).exp() / n as f64;
        }
    }

    // contract each axis with the synthesis matrix
    let mut line_in = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        let inner: usize = n.pow((dim - 1 - axis) as u32);
        let block = n * inner;
        for base_block in (0..total).step_by(block) {
            for offset in 0..inner {
                let base = base_block + offset;
                for k in 0..n {
                    line_in[k] = data[base + k * inner];
                }
                for j in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += synth[j * n + k] * line_in[k];
                    }
                    data[base + j * inner] = acc;
                }
            }
        }
    }

    let amp = lambda * lambda;
    let values: Vec<Complex64> = data
        .iter()
        .map(|v| Complex64::new(amp * v.re, 0.0))
        .collect();
    let field = ComplexField::new(grid, values).expect("interpolant stays finite");
    Ok(ScaledPotential {
        potential: Potential {
            field,
            family: PotentialFamily::Custom,
            fp_exponent: v.fp_exponent,
        },
        aliasing_warning: lambda > 1.0,
    })
}
