use num_complex::Complex64;

use super::PauliSum;
use crate::error::{domain, Result};
use crate::sim::{hermitian_eigen, CMatrix, DensityMatrix, StateVector};

/// Full spectral decomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl EigenSystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `i` is the eigenvector of `eigenvalues()[i]`.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> StateVector {
        let n = self.eigenvectors.nrows().trailing_zeros() as usize;
        StateVector::from_raw(n, self.eigenvectors.column(i).iter().copied().collect())
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

pub fn exact_eigensystem(h: &PauliSum) -> Result<EigenSystem> {
    let m = h.to_dense()?;
    let (eigenvalues, eigenvectors) = hermitian_eigen(&m)?;
    Ok(EigenSystem { eigenvalues, eigenvectors })
}

/// Exact thermal state at inverse temperature `beta`.
#[derive(Debug, Clone)]
pub struct GibbsOracle {
    pub beta: f64,
    /// `ln Z` in the unshifted convention `Z = sum_i exp(-beta e_i)`.
    pub log_partition: f64,
    /// `exp(log_partition)`; may overflow to infinity when `log_partition` is large.
    pub partition_function: f64,
    /// Boltzmann weights in eigenvalue order.
    pub probabilities: Vec<f64>,
    pub gibbs: DensityMatrix,
    pub energy: f64,
    pub entropy: f64,
    pub free_energy: f64,
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("beta must be positive and finite, got {beta}"));
    }
    Ok(())
}

/// `(probabilities, ln Z)` via ground-state-shifted log-sum-exp.
fn boltzmann(eigenvalues: &[f64], beta: f64) -> (Vec<f64>, f64) {
    let e0 = eigenvalues[0];
    let weights: Vec<f64> = eigenvalues.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let shifted_z: f64 = weights.iter().sum();
    let probs = weights.iter().map(|w| w / shifted_z).collect();
    (probs, -beta * e0 + shifted_z.ln())
}

pub fn gibbs_state(es: &EigenSystem, beta: f64) -> Result<GibbsOracle> {
    check_beta(beta)?;
    let (probabilities, log_partition) = boltzmann(&es.eigenvalues, beta);
    let v = &es.eigenvectors;
    let mut weighted = v.clone();
    for (j, p) in probabilities.iter().enumerate() {
        weighted.column_mut(j).iter_mut().for_each(|z| *z *= Complex64::new(*p, 0.0));
    }
    let gibbs = DensityMatrix::from_raw(weighted * v.adjoint());
    let energy = probabilities.iter().zip(&es.eigenvalues).map(|(p, e)| p * e).sum();
    let entropy = probabilities.iter().filter(|&&p| p > 0.0).map(|p| -p * p.ln()).sum();
    Ok(GibbsOracle {
        beta,
        log_partition,
        partition_function: log_partition.exp(),
        probabilities,
        gibbs,
        energy,
        entropy,
        free_energy: -log_partition / beta,
    })
}

/// `F = -ln(Z) / beta`.
pub fn exact_free_energy(es: &EigenSystem, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let (_, log_z) = boltzmann(&es.eigenvalues, beta);
    Ok(-log_z / beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{heisenberg_chain, PauliTerm};

    fn single(c: f64, s: &str) -> PauliSum {
        let mut h = PauliSum::new(s.len());
        h.add_term(PauliTerm::parse(c, s).unwrap()).unwrap();
        h
    }

    #[test]
    fn transverse_field_spectrum() {
        for jx in [0.3, -1.7] {
            let es = exact_eigensystem(&single(jx, "X")).unwrap();
            assert!((es.eigenvalues()[0] + jx.abs()).abs() < 1e-14);
            assert!((es.eigenvalues()[1] - jx.abs()).abs() < 1e-14);
        }
    }

    #[test]
    fn two_level_boltzmann_weight() {
        let es = exact_eigensystem(&single(1.0, "Z")).unwrap();
        let g = gibbs_state(&es, 1.0).unwrap();
        let e = std::f64::consts::E;
        let want = e / (e + 1.0 / e);
        assert!((g.probabilities[0] - want).abs() < 1e-14);
        assert!((want - 0.880797).abs() < 1e-6);
        assert!((g.partition_function - (e + 1.0 / e)).abs() < 1e-12);
    }

    #[test]
    fn two_level_free_energy() {
        for (jx, beta) in [(0.3, 1.3), (2.0, 0.4), (-1.0, 5.0)] {
            let es = exact_eigensystem(&single(jx, "X")).unwrap();
            let want = -(2.0 * (beta * jx).cosh()).ln() / beta;
            assert!((exact_free_energy(&es, beta).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_temperature_limit() {
        let h = heisenberg_chain(3, -1.0, 0.3, 0.2, false).unwrap();
        let es = exact_eigensystem(&h).unwrap();
        let g = gibbs_state(&es, 1000.0).unwrap();
        let ground = es.eigenvector(0);
        let a = nalgebra::DVector::from_column_slice(ground.amplitudes());
        let fid = (a.adjoint() * g.gibbs.matrix() * &a)[(0, 0)].re;
        assert!(fid > 1.0 - 1e-6);
        let gap = es.eigenvalues()[1] - es.eigenvalues()[0];
        let f = exact_free_energy(&es, 1000.0).unwrap();
        assert!((f - es.ground_energy()).abs() <= 8.0 * (-1000.0 * gap).exp() / 1000.0 + 1e-12);
    }

    #[test]
    fn rejects_nonpositive_beta() {
        let es = exact_eigensystem(&single(1.0, "Z")).unwrap();
        assert!(gibbs_state(&es, 0.0).is_err());
        assert!(gibbs_state(&es, -1.0).is_err());
        assert!(exact_free_energy(&es, 0.0).is_err());
    }

    #[test]
    fn large_beta_does_not_overflow_probabilities() {
        let es = exact_eigensystem(&single(50.0, "Z")).unwrap();
        let g = gibbs_state(&es, 100.0).unwrap();
        assert!(g.probabilities.iter().all(|p| p.is_finite()));
        assert!((g.free_energy + 50.0).abs() < 1e-10);
    }
}
