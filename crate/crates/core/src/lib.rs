//! Lower bounds on the time any quantum device needs to bring a system close
//! to its Gibbs state, for every Hamiltonian in a prescribed set.
//!
//! Conventions: ħ = k_B = 1 throughout. Times are in natural units; the
//! Planckian time is τ_Pl = β, so a time `t` corresponds to `t / beta`
//! Planckian times. Errors ε are Bures angles in radians; the largest
//! meaningful error is [`bound::EPS_MAX`] = π/4.
//!
//! Module map:
//! - [`quantum`]: Hermitian operators, density matrices, Gibbs states,
//!   fidelity and Bures geometry, propagation and partial trace.
//! - [`metrology`]: thermal quantum Fisher information and its locally-exact
//!   lower bounds, Heisenberg-type dynamical upper bounds.
//! - [`bound`]: the finite-error bound factor χ, its ansatz optimization,
//!   a brute-force oracle and the turned-around speed limit.
//! - [`machines`]: the bound-saturating two-Hamiltonian machine.
//! - [`rlm`]: exact resonant-level-model thermalization dynamics.

pub mod bound;
pub mod error;
pub mod machines;
pub mod metrology;
pub mod optimize;
pub mod quadrature;
pub mod quantum;
pub mod random;
pub mod rlm;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
