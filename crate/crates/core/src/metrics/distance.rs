use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::hamiltonian::{exact_eigensystem, gibbs_state, GibbsOracle, PauliSum};
use crate::sim::linalg::hermitian_map;
use crate::sim::{hermitian_eigen, CMatrix, DensityMatrix};

/// Free-energy error, infidelity `1 - f` and trace distance to the Gibbs state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricTriple {
    pub delta_f: f64,
    pub infidelity: f64,
    pub trace_distance: f64,
}

fn same_shape(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return domain(format!("density matrices of dimension {} and {}", a.dim(), b.dim()));
    }
    Ok(())
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2`, clamped to `[0, 1]`.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    same_shape(rho1, rho2)?;
    let s = hermitian_map(rho1.matrix(), |l| l.max(0.0).sqrt())?;
    let inner: CMatrix = &s * rho2.matrix() * &s;
    let (vals, _) = hermitian_eigen(&inner)?;
    // round-off eigenvalues of rank-deficient inputs would otherwise add ~sqrt(eps)
    let floor = 64.0 * f64::EPSILON * vals.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let root: f64 = vals.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum();
    Ok((root * root).clamp(0.0, 1.0))
}

/// Half the trace norm of `rho1 - rho2`.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    same_shape(rho1, rho2)?;
    let diff = rho1.matrix() - rho2.matrix();
    let (vals, _) = hermitian_eigen(&diff)?;
    Ok((0.5 * vals.iter().map(|l| l.abs()).sum::<f64>()).clamp(0.0, 1.0))
}

/// All three metrics against the exact Gibbs state of `h` at `beta`.
pub fn metric_triple(model: &DensityMatrix, h: &PauliSum, beta: f64) -> Result<MetricTriple> {
    let oracle = gibbs_state(&exact_eigensystem(h)?, beta)?;
    metric_triple_against(model, &h.to_dense()?, &oracle)
}

/// Same as [`metric_triple`] with a precomputed dense Hamiltonian and oracle.
///
/// The model free energy is `Tr(H rho) - S(rho) / beta` with the von Neumann
/// entropy of `rho`.
pub fn metric_triple_against(
    model: &DensityMatrix,
    h_dense: &CMatrix,
    oracle: &GibbsOracle,
) -> Result<MetricTriple> {
    let energy = model.expectation_dense(h_dense)?;
    let f_model = energy - model.entropy()? / oracle.beta;
    Ok(MetricTriple {
        delta_f: f_model - oracle.free_energy,
        infidelity: 1.0 - fidelity(model, &oracle.gibbs)?,
        trace_distance: trace_distance(model, &oracle.gibbs)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::heisenberg_chain;
    use crate::sim::{basis_state, StateVector};
    use crate::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fidelity_limits() {
        let a = DensityMatrix::pure(&basis_state(1, 0).unwrap());
        let b = DensityMatrix::pure(&basis_state(1, 1).unwrap());
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&a, &b).unwrap().abs() < 1e-12);
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance(&a, &a).unwrap().abs() < 1e-12);
    }

    #[test]
    fn pure_against_mixed() {
        let s = 0.5f64.sqrt();
        let plus = StateVector::from_amplitudes(vec![c(s, 0.0), c(0.0, s)]).unwrap();
        let rho = DensityMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
        ))
        .unwrap();
        // <a|rho|a> with a = (1, i)/sqrt 2
        let a = plus.amplitudes();
        let mut direct = c(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                direct += a[i].conj() * rho.matrix()[(i, j)] * a[j];
            }
        }
        let f = fidelity(&DensityMatrix::pure(&plus), &rho).unwrap();
        assert!((f - direct.re).abs() < 1e-12);
    }

    #[test]
    fn half_trace_distance_to_mixed() {
        let a = DensityMatrix::pure(&basis_state(1, 0).unwrap());
        let mm = DensityMatrix::maximally_mixed(1).unwrap();
        assert!((trace_distance(&a, &mm).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(1).unwrap();
        let b = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(fidelity(&a, &b).is_err());
        assert!(trace_distance(&a, &b).is_err());
    }

    #[test]
    fn triple_vanishes_at_gibbs() {
        let h = heisenberg_chain(3, -1.0, 0.3, 0.2, false).unwrap();
        let oracle = gibbs_state(&exact_eigensystem(&h).unwrap(), 1.3).unwrap();
        let t = metric_triple(&oracle.gibbs, &h, 1.3).unwrap();
        assert!(t.delta_f.abs() < 1e-9 && t.infidelity.abs() < 1e-9 && t.trace_distance.abs() < 1e-9);

        let mm = DensityMatrix::maximally_mixed(3).unwrap();
        let t = metric_triple(&mm, &h, 5.0).unwrap();
        assert!(t.delta_f > 0.0 && t.infidelity > 0.0 && t.trace_distance > 0.0);
    }
}
