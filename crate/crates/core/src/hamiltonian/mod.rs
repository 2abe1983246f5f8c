//! Pauli-sum Hamiltonians, the two spin models and the exact Gibbs oracle.
//!
//! Energies are in units of the coupling with `hbar = k_B = 1`; `beta` is the
//! inverse temperature.

mod models;
mod pauli;
mod spectrum;

pub use models::{heisenberg_chain, j1j2_couplings, j1j2_lattice, LatticeSpec};
pub use pauli::{expectation, Pauli, PauliSum, PauliTerm};
pub use spectrum::{exact_eigensystem, exact_free_energy, gibbs_state, EigenSystem, GibbsOracle};
