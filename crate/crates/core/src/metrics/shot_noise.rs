//! Statistical error of the thermal energy `E = sum_i p_i e_i` estimated from
//! `N` shots.
//!
//! Two protocols are compared. Measuring every eigenvalue with `N / 2^n`
//! shots and forming Boltzmann weights classically gives
//! [`error_estimate_uniform`]. Sampling basis states through the
//! intermediate measurement, so state `i` receives about `p_i N` shots, gives
//! [`error_estimate_qvqt`].

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::hamiltonian::{exact_eigensystem, EigenSystem, PauliSum};
use crate::sim::sampling::multinomial;
use crate::sim::seeded_rng;

/// Inputs of both estimators, indexed by eigenstate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorModelInput {
    /// Single-shot standard deviation of the energy in each eigenstate.
    pub sigmas: Vec<f64>,
    pub probs: Vec<f64>,
    pub energies: Vec<f64>,
    pub beta: f64,
    pub shots: u64,
    pub n_qubits: usize,
}

impl ErrorModelInput {
    pub fn validate(&self) -> Result<()> {
        let n = self.sigmas.len();
        if self.probs.len() != n || self.energies.len() != n {
            return domain("sigmas, probs and energies differ in length");
        }
        if self.shots == 0 {
            return domain("shots must be >= 1");
        }
        Ok(())
    }
}

/// `sqrt(2^n sum_i sigma_i^2 p_i^2 (1 - beta e_i (1 - p_i))^2) / sqrt(N)`.
pub fn error_estimate_uniform(input: &ErrorModelInput) -> f64 {
    let scale = 2f64.powi(input.n_qubits as i32);
    let sum: f64 = input
        .sigmas
        .iter()
        .zip(&input.probs)
        .zip(&input.energies)
        .map(|((s, p), e)| {
            let d = p * (1.0 - input.beta * e * (1.0 - p));
            s * s * d * d
        })
        .sum();
    (scale * sum).sqrt() / (input.shots as f64).sqrt()
}

/// `sqrt(sum_i [sigma_i^2 p_i + p_i (1 - p_i) e_i^2 / N]) / sqrt(N)`.
///
/// The second term propagates `Delta p_i = sqrt(p_i (1 - p_i)) / N`. The
/// binomial standard deviation of a frequency is `sqrt(p_i (1 - p_i) / N)`,
/// so this term underestimates the probability noise by `sqrt(N)`; see
/// [`probability_noise_term`] for the unscaled version.
pub fn error_estimate_qvqt(input: &ErrorModelInput) -> f64 {
    let n = input.shots as f64;
    let sum: f64 = input
        .sigmas
        .iter()
        .zip(&input.probs)
        .zip(&input.energies)
        .map(|((s, p), e)| s * s * p + p * (1.0 - p) * e * e / n)
        .sum();
    sum.sqrt() / n.sqrt()
}

/// Leading `1/sqrt(N)` part of [`error_estimate_qvqt`]: `sqrt(sum sigma_i^2 p_i / N)`.
pub fn error_estimate_qvqt_leading(input: &ErrorModelInput) -> f64 {
    let sum: f64 = input.sigmas.iter().zip(&input.probs).map(|(s, p)| s * s * p).sum();
    (sum / input.shots as f64).sqrt()
}

/// `sqrt(sum_i p_i (1 - p_i) e_i^2 / N)`: energy error from binomial
/// fluctuations of each frequency, ignoring their covariances.
pub fn probability_noise_term(input: &ErrorModelInput) -> f64 {
    let sum: f64 = input
        .probs
        .iter()
        .zip(&input.energies)
        .map(|(p, e)| p * (1.0 - p) * e * e)
        .sum();
    (sum / input.shots as f64).sqrt()
}

/// Single-shot energy standard deviation of each eigenstate when every
/// non-identity Pauli term is measured once per shot:
/// `sigma_i^2 = sum_t c_t^2 (1 - <P_t>_i^2)`.
pub fn eigenstate_sigmas(h: &PauliSum, es: &EigenSystem) -> Vec<f64> {
    (0..es.dim())
        .map(|i| {
            let psi = es.eigenvector(i);
            h.terms()
                .iter()
                .filter(|t| !t.is_identity())
                .map(|t| {
                    let m = t.pauli_expectation(psi.amplitudes());
                    t.coefficient().powi(2) * (1.0 - m * m).max(0.0)
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// Whether per-state energies carry measurement noise in the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateNoise {
    /// Each Pauli term is sampled as a binomial with the state's shot count.
    PauliSampling,
    /// Energies are exact; only the state frequencies fluctuate.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloError {
    /// Sample standard deviation of the energy estimate across trials.
    pub empirical: f64,
    /// [`error_estimate_qvqt`] for the same inputs.
    pub predicted: f64,
    pub input: ErrorModelInput,
    pub mean_estimate: f64,
    pub exact_energy: f64,
}

/// Simulated shot noise of the sampled thermal energy, with per-state noise.
pub fn monte_carlo_energy_error(
    h: &PauliSum,
    beta: f64,
    shots: u64,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloError> {
    monte_carlo_energy_error_with(h, beta, shots, trials, seed, StateNoise::PauliSampling)
}

/// Repeats the sampling pipeline `trials` times: draw `shots` eigenstate
/// indices from the exact Gibbs distribution, estimate each sampled state's
/// energy from its own shots, and form `sum_i (n_i / N) e_i`.
pub fn monte_carlo_energy_error_with(
    h: &PauliSum,
    beta: f64,
    shots: u64,
    trials: usize,
    seed: u64,
    noise: StateNoise,
) -> Result<MonteCarloError> {
    if h.n_qubits() > 4 {
        return domain(format!("at most 4 qubits, got {}", h.n_qubits()));
    }
    if trials < 100 {
        return domain(format!("need at least 100 trials, got {trials}"));
    }
    if shots == 0 {
        return domain("shots must be >= 1");
    }
    if !(beta >= 0.0 && beta.is_finite()) {
        return domain(format!("beta must be finite and >= 0, got {beta}"));
    }
    let es = exact_eigensystem(h)?;
    let energies = es.eigenvalues().to_vec();
    let e0 = energies[0];
    let weights: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / z).collect();

    let identity: f64 = h.terms().iter().filter(|t| t.is_identity()).map(|t| t.coefficient()).sum();
    let terms: Vec<_> = h.terms().iter().filter(|t| !t.is_identity()).collect();
    // (coefficient, probability of outcome +1) per state and term
    let term_stats: Vec<Vec<(f64, f64)>> = (0..es.dim())
        .map(|i| {
            let psi = es.eigenvector(i);
            terms
                .iter()
                .map(|t| {
                    let m = t.pauli_expectation(psi.amplitudes());
                    (t.coefficient(), (0.5 * (1.0 + m)).clamp(0.0, 1.0))
                })
                .collect()
        })
        .collect();

    let estimates: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = seeded_rng(seed, trial as u64);
            let counts = multinomial(&probs, shots, &mut rng)?;
            let mut e = 0.0;
            for (i, &n_i) in counts.iter().enumerate() {
                if n_i == 0 {
                    continue;
                }
                let e_i = match noise {
                    StateNoise::None => energies[i],
                    StateNoise::PauliSampling => identity + sampled_state_energy(&term_stats[i], n_i, &mut rng)?,
                };
                e += n_i as f64 / shots as f64 * e_i;
            }
            Ok(e)
        })
        .collect::<Result<_>>()?;

    let mean = estimates.iter().sum::<f64>() / trials as f64;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let sigmas = match noise {
        StateNoise::None => vec![0.0; es.dim()],
        StateNoise::PauliSampling => eigenstate_sigmas(h, &es),
    };
    let exact_energy = probs.iter().zip(&energies).map(|(p, e)| p * e).sum();
    let input = ErrorModelInput { sigmas, probs, energies, beta, shots, n_qubits: h.n_qubits() };
    Ok(MonteCarloError {
        empirical: var.sqrt(),
        predicted: error_estimate_qvqt(&input),
        input,
        mean_estimate: mean,
        exact_energy,
    })
}

fn sampled_state_energy<R: Rng + ?Sized>(stats: &[(f64, f64)], shots: u64, rng: &mut R) -> Result<f64> {
    let mut e = 0.0;
    for &(c, q) in stats {
        let k = Binomial::new(shots, q)
            .map_err(|err| Error::Numerical(format!("binomial({shots}, {q}): {err}")))?
            .sample(rng);
        e += c * (2.0 * k as f64 / shots as f64 - 1.0);
    }
    Ok(e)
}
