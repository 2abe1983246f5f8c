use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::hamiltonian::{LatticeSpec, PauliSum};
use crate::sim::{DensityMatrix, StateVector};

/// Nearest-neighbour (`c0`) and next-nearest-neighbour (`c1`) averages of
/// `<Z_i Z_j>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub c0: f64,
    pub c1: f64,
}

fn check_lattice(lattice: &LatticeSpec, n_qubits: usize) -> Result<()> {
    if lattice.nn_pairs().is_empty() || lattice.nnn_pairs().is_empty() {
        return domain("lattice needs both nearest and next-nearest pairs");
    }
    if lattice.n_sites() != n_qubits {
        return domain(format!("lattice has {} sites, state {n_qubits} qubits", lattice.n_sites()));
    }
    Ok(())
}

fn zz_sign(b: usize, (i, j): (usize, usize)) -> f64 {
    if ((b >> i) ^ (b >> j)) & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Averages over a diagonal of basis-state weights.
fn from_diagonal(weights: impl Fn(usize) -> f64, dim: usize, lattice: &LatticeSpec) -> CorrelationResult {
    let avg = |pairs: &[(usize, usize)]| {
        let total: f64 = pairs
            .iter()
            .map(|&pair| (0..dim).map(|b| weights(b) * zz_sign(b, pair)).sum::<f64>())
            .sum();
        total / pairs.len() as f64
    };
    CorrelationResult { c0: avg(lattice.nn_pairs()), c1: avg(lattice.nnn_pairs()) }
}

/// `Tr(rho Z_i Z_j)` averaged over each pair list.
pub fn correlations(rho: &DensityMatrix, lattice: &LatticeSpec) -> Result<CorrelationResult> {
    check_lattice(lattice, rho.n_qubits())?;
    let m = rho.matrix();
    Ok(from_diagonal(|b| m[(b, b)].re, rho.dim(), lattice))
}

pub fn correlations_of_state(state: &StateVector, lattice: &LatticeSpec) -> Result<CorrelationResult> {
    check_lattice(lattice, state.n_qubits())?;
    let a = state.amplitudes();
    Ok(from_diagonal(|b| a[b].norm_sqr(), state.dim(), lattice))
}

/// Same averages with `(XX + YY + ZZ) / 3` in place of `ZZ`.
///
/// Agrees with [`correlations`] on any state that commutes with global spin
/// rotations.
pub fn correlations_heisenberg(rho: &DensityMatrix, lattice: &LatticeSpec) -> Result<CorrelationResult> {
    check_lattice(lattice, rho.n_qubits())?;
    let avg = |pairs: &[(usize, usize)]| -> Result<f64> {
        let mut op = PauliSum::new(rho.n_qubits());
        for &(i, j) in pairs {
            op.add_exchange(1.0 / (3.0 * pairs.len() as f64), i, j)?;
        }
        rho.expectation_dense(&op.to_dense()?)
    };
    Ok(CorrelationResult { c0: avg(lattice.nn_pairs())?, c1: avg(lattice.nnn_pairs())? })
}

/// Boltzmann-weighted mix of per-eigenstate correlations at `beta`.
///
/// `beta = inf` averages the lowest-energy states (exact ties) with equal
/// weight; `beta = 0` gives the plain mean.
pub fn correlations_from_spectrum(
    per_state: &[CorrelationResult],
    energies: &[f64],
    beta: f64,
) -> Result<CorrelationResult> {
    if per_state.len() != energies.len() {
        return domain("correlation and energy lists differ in length");
    }
    if per_state.is_empty() {
        return domain("no states to mix");
    }
    if beta.is_nan() || beta < 0.0 {
        return domain(format!("beta must be >= 0, got {beta}"));
    }
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies
        .iter()
        .map(|&e| {
            let gap = e - e0;
            if beta.is_infinite() {
                if gap == 0.0 { 1.0 } else { 0.0 }
            } else {
                (-beta * gap).exp()
            }
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let mix = |f: fn(&CorrelationResult) -> f64| {
        per_state.iter().zip(&weights).map(|(c, w)| w * f(c)).sum::<f64>() / z
    };
    Ok(CorrelationResult { c0: mix(|c| c.c0), c1: mix(|c| c.c1) })
}

/// Sign changes of `ys` over the grid `xs`, located by linear interpolation.
/// A value of exactly zero on a grid point is reported once.
pub fn zero_crossings(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..xs.len().min(ys.len()) {
        if ys[k] == 0.0 {
            out.push(xs[k]);
            continue;
        }
        if k + 1 < xs.len().min(ys.len()) && ys[k + 1] != 0.0 && (ys[k] < 0.0) != (ys[k + 1] < 0.0) {
            let t = ys[k] / (ys[k] - ys[k + 1]);
            out.push(xs[k] + t * (xs[k + 1] - xs[k]));
        }
    }
    out
}
