use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{
    check_dims, intermediate_distribution, model_density, retained_indices, sampled_distribution,
    sampled_energy, shannon,
};
use super::{summarize, Mode, QvqtConfig, Summary, PARAM_BOUND};
use crate::ansatz::ParameterVector;
use crate::error::{domain, Error, Result};
use crate::hamiltonian::PauliSum;
use crate::optim::{minimize, IterationRecord, LbfgsbOptions, Termination};
use crate::sim::circuit::apply_pauli;
use crate::sim::{seeded_rng, Circuit, DensityMatrix, Gate, ProbDist, StateVector};

/// Entropy circuit, energy circuit, Hamiltonian and settings.
#[derive(Debug, Clone)]
pub struct Thermalizer {
    vqc1: Circuit,
    vqc2: Circuit,
    hamiltonian: PauliSum,
    config: QvqtConfig,
}

/// Energy, entropy and free energy at one parameter point.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub distribution: ProbDist,
    pub retained: Vec<usize>,
    pub state_energies: Vec<f64>,
    pub energy: f64,
    pub entropy: f64,
    pub free_energy: f64,
}

/// Outcome of one local optimization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QvqtResult {
    pub params: ParameterVector,
    pub probabilities: Vec<f64>,
    /// Basis indices kept in the energy evaluation.
    pub retained: Vec<usize>,
    /// `<psi_i|H|psi_i>` for each retained basis state.
    pub state_energies: Vec<f64>,
    pub energy: f64,
    /// Entropy in nats.
    pub entropy: f64,
    pub free_energy: f64,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    pub grad_max_norm: f64,
    pub history: Vec<IterationRecord>,
    /// Objective evaluations, line-search trials included.
    pub evaluations: usize,
    /// Smallest free energy seen at any evaluation.
    pub min_evaluated_free_energy: f64,
    pub seed: Option<u64>,
}

impl QvqtResult {
    /// Non-finite objective during the run.
    pub fn failed(&self) -> bool {
        self.termination == Termination::NonFinite
    }

    /// Free energy with failed runs mapped to `+inf`.
    pub fn ranked_free_energy(&self) -> f64 {
        if self.failed() {
            f64::INFINITY
        } else {
            self.free_energy
        }
    }
}

#[derive(Debug, Clone)]
pub struct MultistartOutcome {
    pub runs: Vec<QvqtResult>,
    /// Index of the run with the lowest free energy.
    pub best_index: usize,
    pub free_energy: Summary,
    pub failed: usize,
}

impl MultistartOutcome {
    pub fn best(&self) -> &QvqtResult {
        &self.runs[self.best_index]
    }
}

/// A measured basis state mapped through the energy circuit.
#[derive(Debug, Clone)]
pub struct Eigenstate {
    pub basis_index: usize,
    pub probability: f64,
    pub energy: f64,
    pub state: StateVector,
}

impl Thermalizer {
    pub fn new(vqc1: Circuit, vqc2: Circuit, hamiltonian: PauliSum, config: QvqtConfig) -> Result<Self> {
        config.validate()?;
        if vqc1.n_qubits() != vqc2.n_qubits() || hamiltonian.n_qubits() != vqc1.n_qubits() {
            return domain(format!(
                "qubit counts differ: circuits {} and {}, Hamiltonian {}",
                vqc1.n_qubits(),
                vqc2.n_qubits(),
                hamiltonian.n_qubits()
            ));
        }
        Ok(Self { vqc1, vqc2, hamiltonian, config })
    }

    pub fn entropy_circuit(&self) -> &Circuit {
        &self.vqc1
    }

    pub fn energy_circuit(&self) -> &Circuit {
        &self.vqc2
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn config(&self) -> &QvqtConfig {
        &self.config
    }

    pub fn n_params(&self) -> usize {
        self.vqc1.n_params() + self.vqc2.n_params()
    }

    /// Circuits per full gradient with the parameter-shift rule, plus the
    /// unshifted evaluation: `2 n_var + 1`.
    pub fn circuits_per_gradient(&self) -> usize {
        2 * self.n_params() + 1
    }

    pub fn model_density(&self, params: &ParameterVector) -> Result<DensityMatrix> {
        model_density(&self.vqc1, &self.vqc2, params)
    }

    /// Exact evaluation regardless of the configured mode.
    pub fn evaluate(&self, params: &ParameterVector) -> Result<Evaluation> {
        params.check(&self.vqc1, &self.vqc2)?;
        let distribution = intermediate_distribution(&self.vqc1, &params.phi)?;
        let ens = Ensemble::forward(self, &params.theta, &distribution)?;
        let entropy = shannon(distribution.probs());
        let energy = ens.energy;
        Ok(Evaluation {
            retained: ens.retained.clone(),
            state_energies: ens.state_energies.clone(),
            distribution,
            energy,
            entropy,
            free_energy: energy - entropy / self.config.beta,
        })
    }

    /// `F = E - S / beta`; shot-based when the mode is sampled.
    pub fn free_energy(&self, params: &ParameterVector) -> Result<f64> {
        match self.config.mode {
            Mode::Exact => Ok(self.evaluate(params)?.free_energy),
            Mode::Sampled { shots } => {
                params.check(&self.vqc1, &self.vqc2)?;
                let seed = self.config.master_seed;
                let (dist, counts) = sampled_distribution(&self.vqc1, &params.phi, shots, seed)?;
                let energy = sampled_energy(&self.vqc2, &params.theta, &counts, &self.hamiltonian, seed)?;
                Ok(energy - shannon(dist.probs()) / self.config.beta)
            }
        }
    }

    /// Exact gradient `dF/d(phi, theta)`, flattened as `phi` then `theta`.
    pub fn gradient(&self, params: &ParameterVector) -> Result<Vec<f64>> {
        Ok(self.value_and_gradient(params)?.1)
    }

    /// Free energy and its gradient from one forward/backward sweep.
    ///
    /// Entropy-circuit derivatives use shifted circuits `phi_k +- pi/2` on the
    /// measured probabilities and the chain rule through `E` and `S`.
    /// Energy-circuit derivatives are the parameter-shift differences
    /// `(E(theta_k + pi/2) - E(theta_k - pi/2)) / 2`, evaluated in closed form
    /// as `Im <lambda| A |psi>` at each rotation, where `lambda` is `H psi`
    /// propagated back through the remaining gates.
    pub fn value_and_gradient(&self, params: &ParameterVector) -> Result<(f64, Vec<f64>)> {
        params.check(&self.vqc1, &self.vqc2)?;
        let beta = self.config.beta;
        let dist = intermediate_distribution(&self.vqc1, &params.phi)?;
        let mut ens = Ensemble::forward(self, &params.theta, &dist)?;
        let s = shannon(dist.probs());
        let f = ens.energy - s / beta;

        let dfdp = self.free_energy_wrt_probs(&dist, &ens);
        let mut grad = self.phi_gradient(&params.phi, &dfdp)?;
        grad.extend(ens.theta_gradient(&self.vqc2, &params.theta, &self.hamiltonian));
        Ok((f, grad))
    }

    /// Same quantity as [`Self::gradient`], computed by running every shifted
    /// circuit explicitly (`2 n_var` circuit evaluations).
    pub fn gradient_by_shifted_circuits(&self, params: &ParameterVector) -> Result<Vec<f64>> {
        params.check(&self.vqc1, &self.vqc2)?;
        let dist = intermediate_distribution(&self.vqc1, &params.phi)?;
        let ens = Ensemble::forward(self, &params.theta, &dist)?;
        let dfdp = self.free_energy_wrt_probs(&dist, &ens);
        let mut grad = self.phi_gradient(&params.phi, &dfdp)?;
        let mut theta = params.theta.clone();
        for k in 0..theta.len() {
            let orig = theta[k];
            theta[k] = orig + FRAC_PI_2;
            let plus = Ensemble::forward(self, &theta, &dist)?.energy;
            theta[k] = orig - FRAC_PI_2;
            let minus = Ensemble::forward(self, &theta, &dist)?.energy;
            theta[k] = orig;
            grad.push(0.5 * (plus - minus));
        }
        Ok(grad)
    }

    /// `dF/dp_i` holding the retained set fixed.
    fn free_energy_wrt_probs(&self, dist: &ProbDist, ens: &Ensemble) -> Vec<f64> {
        let beta = self.config.beta;
        let mut dfdp: Vec<f64> = dist
            .probs()
            .iter()
            .map(|&p| if p > 0.0 { (p.ln() + 1.0) / beta } else { 0.0 })
            .collect();
        for (&i, e) in ens.retained.iter().zip(&ens.state_energies) {
            dfdp[i] += (e - ens.energy) / ens.mass;
        }
        dfdp
    }

    fn phi_gradient(&self, phi: &[f64], dfdp: &[f64]) -> Result<Vec<f64>> {
        let mut shifted = phi.to_vec();
        let mut grad = Vec::with_capacity(phi.len());
        for k in 0..phi.len() {
            shifted[k] = phi[k] + FRAC_PI_2;
            let plus = intermediate_distribution(&self.vqc1, &shifted)?;
            shifted[k] = phi[k] - FRAC_PI_2;
            let minus = intermediate_distribution(&self.vqc1, &shifted)?;
            shifted[k] = phi[k];
            let g = plus
                .probs()
                .iter()
                .zip(minus.probs())
                .zip(dfdp)
                .map(|((a, b), d)| 0.5 * (a - b) * d)
                .sum();
            grad.push(g);
        }
        Ok(grad)
    }

    /// Local minimization from `initial` inside the box `[-2 pi, 2 pi]`.
    pub fn optimize(&self, initial: &ParameterVector) -> Result<QvqtResult> {
        if self.config.mode != Mode::Exact {
            return domain("optimization runs on exact expectation values only");
        }
        initial.check(&self.vqc1, &self.vqc2)?;
        let n_phi = self.vqc1.n_params();
        let opts = LbfgsbOptions {
            grad_tolerance: self.config.grad_tolerance,
            max_iterations: self.config.max_iterations,
            lower: -PARAM_BOUND,
            upper: PARAM_BOUND,
            ..LbfgsbOptions::default()
        };
        let objective = |x: &[f64]| match self.value_and_gradient(&ParameterVector::from_flat(x, n_phi)) {
            Ok(v) => v,
            Err(_) => (f64::NAN, vec![f64::NAN; x.len()]),
        };
        let m = minimize(objective, &initial.to_flat(), &opts);
        let params = ParameterVector::from_flat(&m.x, n_phi);
        let eval = self.evaluate(&params);
        let (probabilities, retained, state_energies, energy, entropy) = match eval {
            Ok(e) => (e.distribution.probs().to_vec(), e.retained, e.state_energies, e.energy, e.entropy),
            Err(_) => (Vec::new(), Vec::new(), Vec::new(), f64::NAN, f64::NAN),
        };
        Ok(QvqtResult {
            params,
            probabilities,
            retained,
            state_energies,
            energy,
            entropy,
            free_energy: m.value,
            iterations: m.iterations,
            converged: m.termination == Termination::Converged,
            termination: m.termination,
            grad_max_norm: m.grad_max_norm,
            history: m.history,
            evaluations: m.evaluations,
            min_evaluated_free_energy: m.min_evaluated,
            seed: None,
        })
    }

    /// Random initial angles for run `index`, drawn from the derived seed.
    pub fn initial_params(&self, seed: u64) -> ParameterVector {
        let mut rng = seeded_rng(seed, 0);
        ParameterVector::random(self.vqc1.n_params(), self.vqc2.n_params(), &mut rng)
    }

    /// Seed of run `index` derived from the master seed.
    pub fn run_seed(&self, index: usize) -> u64 {
        seeded_rng(self.config.master_seed, index as u64 + 1).next_u64()
    }

    /// `n_starts` independent optimizations from random initial angles.
    pub fn multistart(&self) -> Result<MultistartOutcome> {
        let runs: Vec<QvqtResult> = (0..self.config.n_starts)
            .into_par_iter()
            .map(|k| {
                let seed = self.run_seed(k);
                let mut r = self.optimize(&self.initial_params(seed))?;
                r.seed = Some(seed);
                Ok(r)
            })
            .collect::<Result<_>>()?;
        let failed = runs.iter().filter(|r| r.failed()).count();
        if failed == runs.len() {
            return Err(Error::Numerical(format!("all {failed} runs failed")));
        }
        let values: Vec<f64> = runs.iter().map(QvqtResult::ranked_free_energy).collect();
        let best_index = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        Ok(MultistartOutcome { free_energy: summarize(&values), best_index, failed, runs })
    }

    /// The `k` most probable retained basis states mapped through the energy
    /// circuit, sorted by energy ascending.
    pub fn extract_eigenstates(&self, result: &QvqtResult, k: usize) -> Result<Vec<Eigenstate>> {
        let dist = ProbDist::new(result.probabilities.clone())?;
        let (mut retained, _) = retained_indices(&dist, self.config.prob_cutoff)?;
        if k == 0 || k > retained.len() {
            return domain(format!("k = {k} but {} basis states are retained", retained.len()));
        }
        let p = dist.probs();
        retained.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
        self.map_basis_states(result, &retained[..k])
    }

    /// Basis states `indices` mapped through the energy circuit, whether or
    /// not they were retained, sorted by energy ascending.
    pub fn map_basis_states(&self, result: &QvqtResult, indices: &[usize]) -> Result<Vec<Eigenstate>> {
        let mut out = indices
            .iter()
            .map(|&i| {
                let state = self.vqc2.apply_to_basis(&result.params.theta, i)?;
                let energy = self.hamiltonian.expectation_raw(state.amplitudes());
                let probability = result.probabilities.get(i).copied().unwrap_or(0.0);
                Ok(Eigenstate { basis_index: i, probability, energy, state })
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        Ok(out)
    }
}

/// Retained basis states pushed through the energy circuit.
struct Ensemble {
    retained: Vec<usize>,
    weights: Vec<f64>,
    states: Vec<Vec<Complex64>>,
    state_energies: Vec<f64>,
    energy: f64,
    mass: f64,
}

impl Ensemble {
    fn forward(th: &Thermalizer, theta: &[f64], dist: &ProbDist) -> Result<Self> {
        check_dims(&th.vqc2, dist, &th.hamiltonian)?;
        let (retained, mass) = retained_indices(dist, th.config.prob_cutoff)?;
        let dim = th.vqc2.dim();
        let mut states = Vec::with_capacity(retained.len());
        let mut state_energies = Vec::with_capacity(retained.len());
        let mut weights = Vec::with_capacity(retained.len());
        let mut energy = 0.0;
        for &i in &retained {
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            amps[i] = Complex64::new(1.0, 0.0);
            th.vqc2.apply_in_place(theta, &mut amps)?;
            let e = th.hamiltonian.expectation_raw(&amps);
            let w = dist.probs()[i] / mass;
            energy += w * e;
            weights.push(w);
            state_energies.push(e);
            states.push(amps);
        }
        Ok(Self { retained, weights, states, state_energies, energy, mass })
    }

    /// Consumes the forward states while walking the gates backwards.
    fn theta_gradient(&mut self, vqc2: &Circuit, theta: &[f64], h: &PauliSum) -> Vec<f64> {
        let dim = vqc2.dim();
        let mut grad = vec![0.0; vqc2.n_params()];
        let mut lambdas: Vec<Vec<Complex64>> = self
            .states
            .iter()
            .map(|psi| {
                let mut out = vec![Complex64::new(0.0, 0.0); dim];
                h.apply_into(psi, &mut out);
                out
            })
            .collect();
        let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
        for gate in vqc2.gates().iter().rev() {
            if let Gate::Rotation { axis, target, param } = *gate {
                let mut g = 0.0;
                for ((psi, lam), w) in self.states.iter().zip(&lambdas).zip(&self.weights) {
                    scratch.copy_from_slice(psi);
                    apply_pauli(axis, target, &mut scratch);
                    let z: Complex64 = lam.iter().zip(&scratch).map(|(l, a)| l.conj() * a).sum();
                    g += w * z.im;
                }
                grad[param] = g;
            }
            for (psi, lam) in self.states.iter_mut().zip(lambdas.iter_mut()) {
                gate.apply_inverse(theta, psi);
                gate.apply_inverse(theta, lam);
            }
        }
        grad
    }
}
