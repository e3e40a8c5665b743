//! Cooling and heating of a single two-level atom held in an intracavity
//! far-off-resonant trap (FORT) and probed through a driven cavity mode.
//!
//! The crate is organized bottom-up:
//!
//! - [`params`]: physical constants and knobs of the atom-cavity system.
//! - [`geometry`]: the FORT shift `S_F(r)`, the cavity coupling `g(r)`,
//!   their gradients, and the standing-wave well structure.
//! - [`operators`]: truncated-space operators and the system Hamiltonian.
//! - [`liouville`]: the master-equation superoperator, its partial
//!   derivatives with respect to the local field amplitudes, and the
//!   constrained linear solver used by everything downstream.
//! - [`coefficients`]: steady state, mean force, friction tensor and
//!   velocity-diffusion tensor at a fixed position.
//! - [`dressed`]: closed-form dressed-state analytics in the
//!   single-excitation manifold, including the Sisyphus friction estimate.
//! - [`grid`], [`trajectory`], [`ensemble`], [`survival`], [`averages`],
//!   [`spectrum`]: coefficient tables over (z, rho), stochastic trajectory
//!   integration, trapping-time statistics and spectral diagnostics.

pub mod averages;
pub mod coefficients;
pub mod dressed;
pub mod ensemble;
pub mod geometry;
pub mod grid;
pub mod liouville;
pub mod operators;
pub mod params;
pub mod spectrum;
pub mod survival;
pub mod trajectory;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use params::{SystemParams, TrapVariant};

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
