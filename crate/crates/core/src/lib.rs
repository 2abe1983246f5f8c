//! Variational thermal-state preparation on a dense statevector simulator.
//!
//! A mixed state is encoded by two parameterized circuits separated by a
//! computational-basis measurement. The first circuit fixes the spectrum
//! (the measurement probabilities), the second rotates each measured basis
//! state into an approximate eigenstate. Minimizing `F = E - S/beta` over both
//! parameter sets drives the encoded state towards the Gibbs state.
//!
//! Modules:
//!
//! - [`sim`]: statevectors, gates, circuits, sampling and density matrices.
//! - [`hamiltonian`]: Pauli sums, the spin models, dense diagonalization and
//!   the exact Gibbs oracle.
//! - [`ansatz`]: circuit builders for both variational circuits.
//! - [`thermalizer`]: free energy, parameter-shift gradients, optimization
//!   and multistart.
//! - [`optim`]: box-bounded limited-memory BFGS.
//! - [`metrics`]: fidelity, trace distance, correlation functions, eigenstate
//!   accuracy and measurement-error estimators.
//! - [`experiments`]: declarative experiment configs, sweeps and CSV/JSON output.
//!
//! Qubit 0 is the least-significant bit of a basis-state index throughout.

#![forbid(unsafe_code)]

pub mod ansatz;
pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod metrics;
pub mod optim;
pub mod sim;
pub mod thermalizer;

pub use error::{Error, Result};
pub use num_complex::Complex64;
