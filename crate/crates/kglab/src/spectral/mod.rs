//! Grids, fields, the discrete Fourier transform and multiplier operators.
//!
//! Conventions, used everywhere downstream:
//!
//! * The spatial domain is the periodic box `[-L, L)^n` sampled on `N`
//!   points per axis (`N` a power of two), `dx = 2L/N`.
//! * The dual lattice is `ξ_k = (π/L)·k` for integer `k ∈ [-N/2, N/2)`, so
//!   a field and its transform satisfy `f(x) = N^{-n/2} Σ_k f̂(ξ_k) e^{ix·ξ_k}`.
//! * The transform pair is unitary: `Σ|f̂_k|² = Σ|f_j|²` holds to roundoff,
//!   which turns every Plancherel step in the estimates into an exact
//!   identity on the grid.
//! * The Nyquist index `k = -N/2` has no positive partner. All symbols used
//!   by the propagators are real or unimodular there, so no asymmetry leaks
//!   into real fields.

mod fft;
mod field;
mod grid;
mod io;
mod multiplier;

pub use fft::{fourier_forward, fourier_inverse};
pub use field::{ComplexField, FieldError, SpaceTimeField, SpectralField};
pub use grid::{Grid, GridError};
pub use io::{read_field, write_field, FieldFileError};
pub use multiplier::{apply_multiplier, bessel_derivative, riesz_derivative, MultiplierError};

pub(crate) use fft::{forward_raw_inplace, inverse_raw_inplace};
pub(crate) use multiplier::{apply_unchecked, bessel_symbol, gradient_energy_sum};
