//! Dense statevector simulation.
//!
//! Basis-state index `i` encodes qubit `q` in bit `q` (qubit 0 is the least
//! significant bit). Rotations follow `R_A(theta) = exp(-i theta A / 2)`.

pub(crate) mod circuit;
mod density;
pub(crate) mod linalg;
pub(crate) mod sampling;
mod state;

pub use circuit::{Axis, Circuit, Gate};
pub use density::{density_from_ensemble, DensityMatrix};
pub use linalg::{hermitian_eigen, CMatrix};
pub use sampling::{sample_counts, seeded_rng};
pub use state::{basis_state, measure_probabilities, ProbDist, StateVector};

/// Largest register the dense backend accepts for matrix-valued operations.
pub const MAX_DENSE_QUBITS: usize = 12;

/// Largest register accepted for statevectors.
pub const MAX_STATE_QUBITS: usize = 24;
