use num_complex::Complex64;

use super::MAX_STATE_QUBITS;
use crate::error::{domain, Result};

const NORM_TOL: f64 = 1e-10;

/// Pure state of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return domain(format!("amplitudes have squared norm {norm}, expected 1"));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return domain("cannot normalize a zero or non-finite vector");
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits, amplitudes })
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return domain(format!("state length {len} is not a power of two >= 2"));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_STATE_QUBITS {
        return domain(format!("{n} qubits exceeds the statevector limit {MAX_STATE_QUBITS}"));
    }
    Ok(n)
}

/// Computational basis state `|index>`.
pub fn basis_state(n_qubits: usize, index: usize) -> Result<StateVector> {
    if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
        return domain(format!("n_qubits must be in 1..={MAX_STATE_QUBITS}, got {n_qubits}"));
    }
    let dim = 1usize << n_qubits;
    if index >= dim {
        return domain(format!("basis index {index} out of range for {n_qubits} qubits"));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[index] = Complex64::new(1.0, 0.0);
    Ok(StateVector { n_qubits, amplitudes })
}

/// Probability distribution over the `2^n` computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    n_qubits: usize,
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let n_qubits = qubits_for_len(probs.len())?;
        if probs.iter().any(|p| !p.is_finite() || *p < -1e-12 || *p > 1.0 + 1e-12) {
            return domain("probabilities must lie in [0, 1]");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return domain(format!("probabilities sum to {total}, expected 1"));
        }
        let probs = probs.into_iter().map(|p| p.clamp(0.0, 1.0)).collect();
        Ok(Self { n_qubits, probs })
    }

    /// Empirical frequencies `counts[i] / sum(counts)`.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let shots: u64 = counts.iter().sum();
        if shots == 0 {
            return domain("counts are all zero");
        }
        Self::new(counts.iter().map(|&c| c as f64 / shots as f64).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Born-rule probabilities of `state` in the computational basis.
pub fn measure_probabilities(state: &StateVector) -> ProbDist {
    let mut probs: Vec<f64> = state.amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    ProbDist { n_qubits: state.n_qubits, probs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn basis_states() {
        let s = basis_state(1, 0).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);

        let s = basis_state(2, 3).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.0, 0.0, 0.0, 1.0]);

        let s = basis_state(4, 5).unwrap();
        assert_eq!(s.dim(), 16);
        for (i, a) in s.amplitudes().iter().enumerate() {
            assert_eq!(a.re, if i == 5 { 1.0 } else { 0.0 });
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn basis_state_out_of_range() {
        assert!(basis_state(2, 4).is_err());
        assert!(basis_state(0, 0).is_err());
    }

    #[test]
    fn bell_probabilities() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let bell = StateVector::from_amplitudes(vec![h, z, z, h]).unwrap();
        let p = measure_probabilities(&bell);
        for (got, want) in p.probs().iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let one = Complex64::new(1.0, 0.0);
        assert!(StateVector::from_amplitudes(vec![one, one]).is_err());
        let s = StateVector::normalized(vec![one, one]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(StateVector::from_amplitudes(vec![one, one, one]).is_err());
    }

    #[test]
    fn dist_validation() {
        assert!(ProbDist::new(vec![0.5, 0.6]).is_err());
        assert!(ProbDist::new(vec![1.2, -0.2]).is_err());
        assert!(ProbDist::from_counts(&[0, 0]).is_err());
        let d = ProbDist::from_counts(&[3, 1]).unwrap();
        assert_eq!(d.probs(), &[0.75, 0.25]);
    }
}
