//! Closeness of a model state to the Gibbs state, spin correlations,
//! eigenstate accuracy and shot-noise estimates for the thermal energy.

mod correlation;
mod distance;
mod shot_noise;

pub use correlation::{
    correlations, correlations_from_spectrum, correlations_heisenberg, correlations_of_state,
    zero_crossings, CorrelationResult,
};
pub use distance::{fidelity, metric_triple, metric_triple_against, trace_distance, MetricTriple};
pub use shot_noise::{
    eigenstate_sigmas, error_estimate_qvqt, error_estimate_qvqt_leading, error_estimate_uniform,
    monte_carlo_energy_error, monte_carlo_energy_error_with, probability_noise_term,
    ErrorModelInput, MonteCarloError, StateNoise,
};

use crate::error::{domain, Result};

/// `sum_{i<=k} p_i |e_i^exp - e_i^exact| / (n sum_{i<=k} p_i)`.
///
/// Inputs must already be matched state by state (see [`match_spectrum`]).
pub fn delta_k_energy(
    exp_energies: &[f64],
    exact_energies: &[f64],
    probs: &[f64],
    k: usize,
    n_qubits: usize,
) -> Result<f64> {
    if exp_energies.len() != exact_energies.len() || probs.len() != exp_energies.len() {
        return domain("energy and probability vectors differ in length");
    }
    if k >= exp_energies.len() {
        return domain(format!("k = {k} but only {} states", exp_energies.len()));
    }
    if n_qubits == 0 {
        return domain("n_qubits must be >= 1");
    }
    let mass: f64 = probs[..=k].iter().sum();
    if !(mass > 0.0) {
        return domain("no probability mass among the first k + 1 states");
    }
    let dev: f64 = (0..=k)
        .map(|i| probs[i] * (exp_energies[i] - exact_energies[i]).abs())
        .sum();
    Ok(dev / (n_qubits as f64 * mass))
}

/// Pairs variational states with the exact spectrum.
///
/// States are sorted by their energy and the `i`-th lowest is matched with
/// the `i`-th exact eigenvalue. Sorted order minimizes the total absolute
/// deviation, so it also resolves degenerate exact levels. Returns
/// `(exp_energies, exact_energies, probs)` in matched order.
pub fn match_spectrum(
    exp_energies: &[f64],
    probs: &[f64],
    exact_spectrum: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    if exp_energies.len() != probs.len() {
        return domain("energy and probability vectors differ in length");
    }
    if exp_energies.len() > exact_spectrum.len() {
        return domain("more variational states than exact eigenvalues");
    }
    let mut order: Vec<usize> = (0..exp_energies.len()).collect();
    order.sort_by(|&a, &b| exp_energies[a].total_cmp(&exp_energies[b]));
    let mut exact = exact_spectrum.to_vec();
    exact.sort_by(f64::total_cmp);
    exact.truncate(order.len());
    Ok((
        order.iter().map(|&i| exp_energies[i]).collect(),
        exact,
        order.iter().map(|&i| probs[i]).collect(),
    ))
}
