//! Pseudospectral laboratory for the Klein-Gordon equation
//! `u_tt - Δu + V(x)u + u = 0` on a periodic box, with tooling to measure
//! the dispersive estimates that govern it: weighted space-time `L²` norms,
//! local smoothing functionals, Strichartz norms, Fefferman-Phong potential
//! norms, resolvent bounds and sphere restriction/trace diagnostics.
//!
//! The building blocks:
//!
//! * [`spectral`] — grids, complex fields, the unitary DFT and Fourier
//!   multiplier operators (`⟨∇⟩^s`, `|∇|^s`, ...), field (de)serialization.
//! * [`free_flow`] — the exact free propagators `e^{it√(1-Δ)}`,
//!   `cos(t√(1-Δ))`, `sin(t√(1-Δ))/√(1-Δ)` as multipliers.
//! * [`potential`] — inverse-square / log-corrected / bump potential
//!   families and numerical estimation of the Fefferman-Phong norm
//!   `sup_{x,r} r^{2-n/p} (∫_{B(x,r)} |V|^p)^{1/p}`.
//! * [`norms`] — evaluators for every functional the estimates use.
//! * [`duhamel`] — the Duhamel source operator, Picard iteration for the
//!   perturbed equation, and an independent Strang-splitting integrator.
//! * [`resolvent`] — the free resolvent `(-Δ-z)^{-1}`, the limiting
//!   absorption contour kernel, the space-time multiplier decomposition of
//!   inhomogeneous solutions, and sphere extension operators.
//! * [`synth`] — deterministic test data: Gaussian wave packets and seeded
//!   band-limited random fields.
//!
//! Everything is pure: fields are immutable after construction and every
//! operation returns fresh data, so concurrent evaluation needs no locking.

pub mod ball;
pub mod duhamel;
pub mod free_flow;
pub mod norms;
pub mod potential;
pub mod resolvent;
pub mod spectral;
pub mod synth;

pub use num_complex::Complex64;

pub use duhamel::{
    duhamel_apply, inhomogeneous_solve, picard_solve, reference_solve, PicardTrace, SolveError,
};
pub use free_flow::{cos_flow, free_solution, half_wave, sinc_flow, CauchyData};
pub use norms::{
    check_admissible, hs_lr_norm, local_smoothing_functional, sobolev_norm, strichartz_norm,
    weighted_l2_field, weighted_l2_spacetime, AdmissibleTriple, BallWindow, Weight,
};
pub use potential::{
    dyadic_radii, fp_norm, make_potential, scale_potential, FpNormEstimate, Potential,
    PotentialFamily,
};
pub use resolvent::{
    contour_kernel, remainder_field, resolvent_apply, sphere_extension, tilde_u, SphereDensity,
};
pub use spectral::{
    apply_multiplier, bessel_derivative, fourier_forward, fourier_inverse, read_field,
    riesz_derivative, write_field, ComplexField, Grid, SpaceTimeField, SpectralField,
};
