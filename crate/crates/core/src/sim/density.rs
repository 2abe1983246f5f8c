use num_complex::Complex64;

use super::linalg::{hermitian_eigen, CMatrix};
use super::{ProbDist, StateVector, MAX_DENSE_QUBITS};
use crate::error::{domain, Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive-semidefinite operator on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates the density-matrix invariants.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if !matrix.is_square() || dim < 2 || !dim.is_power_of_two() {
            return domain(format!("{}x{} is not a qubit operator", matrix.nrows(), matrix.ncols()));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::Resource(format!("{n_qubits} qubits exceeds {MAX_DENSE_QUBITS}")));
        }
        for i in 0..dim {
            for j in i..dim {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return domain(format!("not Hermitian at ({i}, {j})"));
                }
            }
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return domain(format!("trace is {trace}, expected 1"));
        }
        let (values, _) = hermitian_eigen(&matrix)?;
        if values[0] < -PSD_TOL {
            return domain(format!("smallest eigenvalue {} is negative", values[0]));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub(crate) fn from_raw(matrix: CMatrix) -> Self {
        let n_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    /// `|psi><psi|`.
    pub fn pure(state: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self::from_raw(&v * v.adjoint())
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_DENSE_QUBITS {
            return domain(format!("unsupported qubit count {n_qubits}"));
        }
        let dim = 1usize << n_qubits;
        Ok(Self::from_raw(CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.matrix)?.0)
    }

    /// Von Neumann entropy in nats, `-Tr(rho ln rho)`.
    pub fn entropy(&self) -> Result<f64> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .filter(|&l| l > 0.0)
            .map(|l| -l * l.ln())
            .sum())
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(rho O)` for a dense operator.
    pub fn expectation_dense(&self, op: &CMatrix) -> Result<f64> {
        if op.shape() != self.matrix.shape() {
            return domain("operator dimension does not match the density matrix");
        }
        // Tr(rho O) = sum_ij rho_ij O_ji
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.matrix[(i, j)] * op[(j, i)];
            }
        }
        Ok(acc.re)
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.shape() != self.matrix.shape() {
            return domain("unitary dimension does not match the density matrix");
        }
        Ok(Self::from_raw(u * &self.matrix * u.adjoint()))
    }
}

/// `sum_i p_i |psi_i><psi_i|`.
pub fn density_from_ensemble(probs: &ProbDist, states: &[StateVector]) -> Result<DensityMatrix> {
    if probs.len() != states.len() {
        return domain(format!(
            "{} probabilities but {} states",
            probs.len(),
            states.len()
        ));
    }
    let n_qubits = states[0].n_qubits();
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Resource(format!("{n_qubits} qubits exceeds {MAX_DENSE_QUBITS}")));
    }
    let dim = 1usize << n_qubits;
    let mut rho = CMatrix::zeros(dim, dim);
    for (p, psi) in probs.probs().iter().zip(states) {
        if *p == 0.0 {
            continue;
        }
        if psi.n_qubits() != n_qubits {
            return domain("states have different qubit counts");
        }
        let a = psi.amplitudes();
        for i in 0..dim {
            let ai = a[i] * *p;
            for j in 0..dim {
                rho[(i, j)] += ai * a[j].conj();
            }
        }
    }
    Ok(DensityMatrix::from_raw(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::basis_state;

    #[test]
    fn pure_ensemble() {
        let p = ProbDist::new(vec![1.0, 0.0]).unwrap();
        let states = [basis_state(1, 0).unwrap(), basis_state(1, 1).unwrap()];
        let rho = density_from_ensemble(&p, &states).unwrap();
        assert_eq!(rho.matrix()[(0, 0)].re, 1.0);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        DensityMatrix::new(rho.matrix().clone()).unwrap();
    }

    #[test]
    fn maximally_mixed_qubit() {
        let p = ProbDist::new(vec![0.5, 0.5]).unwrap();
        let states = [basis_state(1, 0).unwrap(), basis_state(1, 1).unwrap()];
        let rho = density_from_ensemble(&p, &states).unwrap();
        let mm = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(crate::sim::linalg::max_abs_diff(rho.matrix(), mm.matrix()) < 1e-15);
        assert!((rho.entropy().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_ensemble_spectrum_is_probs() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::normalized(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap();
        let minus = StateVector::normalized(vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]).unwrap();
        let p = ProbDist::new(vec![0.3, 0.7]).unwrap();
        let rho = density_from_ensemble(&p, &[plus, minus]).unwrap();
        let ev = rho.eigenvalues().unwrap();
        assert!((ev[0] - 0.3).abs() < 1e-12 && (ev[1] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn count_mismatch_and_invalid_matrices() {
        let p = ProbDist::new(vec![0.5, 0.5]).unwrap();
        assert!(density_from_ensemble(&p, &[basis_state(1, 0).unwrap()]).is_err());

        let c = |re: f64| Complex64::new(re, 0.0);
        assert!(DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.6)])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)])).is_err());
        assert!(DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.2), c(0.1), c(0.5)])).is_err());
    }
}
