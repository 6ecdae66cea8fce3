//! Dense state algebra: operators, Gibbs states, Bures geometry, propagation.

pub mod geometry;
pub mod operator;
pub mod partial_trace;
pub mod propagate;
pub mod state;

pub use geometry::{bures_angle, bures_angle_classical, bures_distance, fidelity, sqrt_fidelity};
pub use operator::{hermitian_eig, spectral_seminorm, CMatrix, HermitianOperator, Spectrum};
pub use partial_trace::{partial_trace, Subsystem};
pub use propagate::{default_steps, propagate, unitary, Schedule, Segment};
pub use state::{gibbs_spectrum, gibbs_state, thermal_populations, DensityMatrix};
