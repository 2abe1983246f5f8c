//! Free-energy minimization over the two-circuit mixed-state model.
//!
//! The model state is `rho = U2 diag(p) U2^dagger` where `p` is the
//! measured distribution after the entropy circuit and `U2` the energy
//! circuit. Its free energy is `F = E - S / beta` with the Shannon entropy
//! `S = -sum p ln p` of the measurement outcomes (the von Neumann entropy of
//! `rho`) and `E = Tr(H rho)`.

mod engine;
mod model;
mod stats;

use serde::{Deserialize, Serialize};

pub use engine::{Eigenstate, Evaluation, MultistartOutcome, QvqtResult, Thermalizer};
pub use model::{
    entropy, intermediate_distribution, model_density, model_energy, sampled_distribution,
    sampled_energy, subsystem_entropy, EnergyEvaluation,
};
pub use stats::{percentile_20, summarize, Summary};

use crate::error::{domain, Result};

/// Bound on every rotation angle during optimization. Rotations are
/// `4 pi`-periodic, so the box does not restrict the reachable unitaries.
pub const PARAM_BOUND: f64 = std::f64::consts::TAU;

/// How the intermediate measurement and the energy are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mode {
    /// Exact probabilities and expectation values.
    #[default]
    Exact,
    /// Finite-shot estimates; for error analysis only, never optimized.
    Sampled { shots: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QvqtConfig {
    pub beta: f64,
    /// Basis states with probability at or below this are skipped when
    /// evaluating the energy.
    pub prob_cutoff: f64,
    /// Stop once the projected-gradient max-norm falls below this.
    pub grad_tolerance: f64,
    pub max_iterations: usize,
    pub n_starts: usize,
    pub master_seed: u64,
    pub mode: Mode,
}

impl Default for QvqtConfig {
    fn default() -> Self {
        Self {
            beta: 1.0,
            prob_cutoff: 1e-12,
            grad_tolerance: 1e-3,
            max_iterations: 2000,
            n_starts: 100,
            master_seed: 0,
            mode: Mode::Exact,
        }
    }
}

impl QvqtConfig {
    pub fn with_beta(beta: f64) -> Self {
        Self { beta, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return domain(format!("beta must be positive and finite, got {}", self.beta));
        }
        if !(self.grad_tolerance > 0.0) {
            return domain("grad_tolerance must be positive");
        }
        if !(0.0..1.0).contains(&self.prob_cutoff) {
            return domain("prob_cutoff must lie in [0, 1)");
        }
        if self.n_starts == 0 {
            return domain("n_starts must be >= 1");
        }
        if let Mode::Sampled { shots: 0 } = self.mode {
            return domain("sampled mode needs at least one shot");
        }
        Ok(())
    }
}
