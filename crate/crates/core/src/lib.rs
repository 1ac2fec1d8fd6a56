//! Fractional-order time dynamics for Schrödinger-type equations.
//!
//! The crate has three layers:
//!
//! * scalar/distributional: power-law memory kernels ([`kernel`]), backward
//!   Weyl-type fractional derivatives of test functions, weak pairings, and
//!   Mittag-Leffler evaluation ([`fracderiv`], [`scalar`]);
//! * spectral: self-adjoint one-dimensional periodic operators diagonalized
//!   either by FFT or by a dense symmetric eigensolver, with the unitary
//!   propagator `exp(i t A^{1/α})` and its generator ([`spectral`]);
//! * verification: a harness of residual checks connecting the two layers,
//!   reported as machine-readable pass/fail records ([`harness`]).
//!
//! Conventions used throughout: the Fourier transform is
//! `Fφ(σ) = ∫ e^{-iσt} φ(t) dt`; fractional powers of `i·a` take the
//! principal branch, `(ia)^p = |a|^p · e^{i p sign(a) π/2}`; the discrete
//! L² inner product carries the grid weight `Δx`.

pub mod error;
pub mod fracderiv;
pub mod harness;
pub mod kernel;
pub mod quad;
pub mod scalar;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
