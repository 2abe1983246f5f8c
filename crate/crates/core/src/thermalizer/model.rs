use num_complex::Complex64;
use rand_distr::{Binomial, Distribution};

use crate::ansatz::ParameterVector;
use crate::error::{domain, Error, Result};
use crate::hamiltonian::PauliSum;
use crate::sim::{
    basis_state, measure_probabilities, sample_counts, seeded_rng, CMatrix, Circuit, DensityMatrix,
    ProbDist, MAX_DENSE_QUBITS,
};

/// Measured distribution after the entropy circuit acting on `|0...0>`.
pub fn intermediate_distribution(vqc1: &Circuit, phi: &[f64]) -> Result<ProbDist> {
    let out = vqc1.apply(phi, &basis_state(vqc1.n_qubits(), 0)?)?;
    Ok(measure_probabilities(&out))
}

/// Empirical frequencies and raw counts from `shots` intermediate measurements.
pub fn sampled_distribution(
    vqc1: &Circuit,
    phi: &[f64],
    shots: u64,
    seed: u64,
) -> Result<(ProbDist, Vec<u64>)> {
    let exact = intermediate_distribution(vqc1, phi)?;
    let counts = sample_counts(&exact, shots, seed)?;
    Ok((ProbDist::from_counts(&counts)?, counts))
}

/// Shannon entropy `-sum p ln p` in nats, with `0 ln 0 = 0`.
pub fn entropy(dist: &ProbDist) -> f64 {
    shannon(dist.probs())
}

pub(crate) fn shannon(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

/// Sum of the entropies of the marginals on contiguous blocks of
/// `subsystem_size` qubits. Equals [`entropy`] for product distributions
/// over the blocks and upper-bounds it otherwise.
pub fn subsystem_entropy(dist: &ProbDist, subsystem_size: usize) -> Result<f64> {
    let n = dist.n_qubits();
    if subsystem_size == 0 || !n.is_multiple_of(subsystem_size) {
        return domain(format!("block size {subsystem_size} does not divide {n} qubits"));
    }
    let mask = (1usize << subsystem_size) - 1;
    let mut total = 0.0;
    for block in 0..n / subsystem_size {
        let shift = block * subsystem_size;
        let mut marginal = vec![0.0; 1 << subsystem_size];
        for (i, p) in dist.probs().iter().enumerate() {
            marginal[(i >> shift) & mask] += p;
        }
        total += shannon(&marginal);
    }
    Ok(total)
}

/// Energy of the model state restricted to the retained basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEvaluation {
    /// `sum_{i retained} p_i e_i / sum_{i retained} p_i`.
    pub energy: f64,
    /// Basis indices with `p_i > cutoff`, ascending.
    pub retained: Vec<usize>,
    /// `<psi_i|H|psi_i>` for each retained index, `psi_i = U2 |b_i>`.
    pub state_energies: Vec<f64>,
    pub retained_mass: f64,
}

pub(crate) fn retained_indices(dist: &ProbDist, cutoff: f64) -> Result<(Vec<usize>, f64)> {
    let retained: Vec<usize> = dist
        .probs()
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > cutoff)
        .map(|(i, _)| i)
        .collect();
    if retained.is_empty() {
        return domain(format!("no basis state has probability above the cutoff {cutoff}"));
    }
    let mass = retained.iter().map(|&i| dist.probs()[i]).sum();
    Ok((retained, mass))
}

pub(crate) fn check_dims(vqc2: &Circuit, dist: &ProbDist, h: &PauliSum) -> Result<()> {
    if dist.n_qubits() != vqc2.n_qubits() || h.n_qubits() != vqc2.n_qubits() {
        return domain(format!(
            "qubit counts differ: distribution {}, circuit {}, Hamiltonian {}",
            dist.n_qubits(),
            vqc2.n_qubits(),
            h.n_qubits()
        ));
    }
    Ok(())
}

/// `E = sum_{p_i > cutoff} p_i <b_i| U2^dagger H U2 |b_i>`, renormalized by
/// the retained probability mass.
pub fn model_energy(
    vqc2: &Circuit,
    theta: &[f64],
    dist: &ProbDist,
    h: &PauliSum,
    cutoff: f64,
) -> Result<EnergyEvaluation> {
    check_dims(vqc2, dist, h)?;
    let (retained, retained_mass) = retained_indices(dist, cutoff)?;
    let mut state_energies = Vec::with_capacity(retained.len());
    let mut energy = 0.0;
    for &i in &retained {
        let psi = vqc2.apply_to_basis(theta, i)?;
        let e = h.expectation_raw(psi.amplitudes());
        energy += dist.probs()[i] * e;
        state_energies.push(e);
    }
    Ok(EnergyEvaluation { energy: energy / retained_mass, retained, state_energies, retained_mass })
}

/// `U2 diag(p) U2^dagger`.
pub fn model_density(
    vqc1: &Circuit,
    vqc2: &Circuit,
    params: &ParameterVector,
) -> Result<DensityMatrix> {
    params.check(vqc1, vqc2)?;
    if vqc1.n_qubits() != vqc2.n_qubits() {
        return domain("circuits act on different registers");
    }
    if vqc2.n_qubits() > MAX_DENSE_QUBITS {
        return Err(Error::Resource(format!("{} qubits exceeds {MAX_DENSE_QUBITS}", vqc2.n_qubits())));
    }
    let p = intermediate_distribution(vqc1, &params.phi)?;
    let u = vqc2.unitary(&params.theta)?;
    let mut scaled: CMatrix = u.clone();
    for (j, pj) in p.probs().iter().enumerate() {
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= Complex64::new(*pj, 0.0));
    }
    Ok(DensityMatrix::from_raw(scaled * u.adjoint()))
}

/// Shot-based energy estimate: each observed basis state `i` (count `c_i`)
/// is prepared `c_i` times and every Pauli term is measured on those shots.
/// Returns `sum_i (c_i / N) * estimate_i`.
pub fn sampled_energy(
    vqc2: &Circuit,
    theta: &[f64],
    counts: &[u64],
    h: &PauliSum,
    seed: u64,
) -> Result<f64> {
    if counts.len() != vqc2.dim() || h.n_qubits() != vqc2.n_qubits() {
        return domain("counts, circuit and Hamiltonian sizes differ");
    }
    let shots: u64 = counts.iter().sum();
    if shots == 0 {
        return domain("no shots recorded");
    }
    let mut rng = seeded_rng(seed, 1);
    let mut total = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let psi = vqc2.apply_to_basis(theta, i)?;
        let mut estimate = 0.0;
        for term in h.terms() {
            if term.is_identity() {
                estimate += term.coefficient();
                continue;
            }
            let expect = term.pauli_expectation(psi.amplitudes());
            let p_plus = (0.5 * (1.0 + expect)).clamp(0.0, 1.0);
            let plus = Binomial::new(c, p_plus)
                .map_err(|e| Error::Numerical(e.to_string()))?
                .sample(&mut rng);
            estimate += term.coefficient() * (2.0 * plus as f64 / c as f64 - 1.0);
        }
        total += c as f64 / shots as f64 * estimate;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_hardware_efficient, build_minimal_entropy_circuit, AnsatzSpec};
    use crate::hamiltonian::{heisenberg_chain, PauliTerm};
    use crate::sim::Axis;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    #[test]
    fn minimal_circuit_distributions() {
        let c = build_minimal_entropy_circuit(3).unwrap();
        let p = intermediate_distribution(&c, &[0.0; 3]).unwrap();
        assert_eq!(p.probs()[0], 1.0);
        let c = build_minimal_entropy_circuit(2).unwrap();
        let p = intermediate_distribution(&c, &[FRAC_PI_2; 2]).unwrap();
        assert!(p.probs().iter().all(|x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&ProbDist::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap()), 0.0);
        let uniform = ProbDist::new(vec![1.0 / 16.0; 16]).unwrap();
        assert!((entropy(&uniform) - 4.0 * LN_2).abs() < 1e-14);
        assert!((entropy(&uniform) - 2.772589).abs() < 1e-6);
        let half = ProbDist::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        assert!((entropy(&half) - LN_2).abs() < 1e-14);
    }

    #[test]
    fn subsystem_entropy_cases() {
        let c = build_minimal_entropy_circuit(4).unwrap();
        let p = intermediate_distribution(&c, &[0.3, -1.2, 2.0, 0.7]).unwrap();
        for size in [1, 2, 4] {
            assert!((subsystem_entropy(&p, size).unwrap() - entropy(&p)).abs() < 1e-12);
        }
        assert!(subsystem_entropy(&p, 3).is_err());

        let bell = ProbDist::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((subsystem_entropy(&bell, 1).unwrap() - 2.0 * LN_2).abs() < 1e-14);
        assert!((entropy(&bell) - LN_2).abs() < 1e-14);
        assert_eq!(subsystem_entropy(&bell, 2).unwrap(), entropy(&bell));
    }

    #[test]
    fn diagonal_hamiltonian_with_identity_circuit() {
        let mut h = PauliSum::new(2);
        h.add_term(PauliTerm::parse(0.7, "ZI").unwrap()).unwrap();
        h.add_term(PauliTerm::parse(-0.4, "ZZ").unwrap()).unwrap();
        h.add_term(PauliTerm::parse(0.1, "IZ").unwrap()).unwrap();
        // rotation-only circuit at zero angles is the identity
        let vqc2 = build_hardware_efficient(&AnsatzSpec::new(2, 0, &[Axis::Y])).unwrap();
        let dist = ProbDist::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let ev = model_energy(&vqc2, &[0.0, 0.0], &dist, &h, 0.0).unwrap();
        let dense = h.to_dense().unwrap();
        let want: f64 = (0..4).map(|i| dist.probs()[i] * dense[(i, i)].re).sum();
        assert!((ev.energy - want).abs() < 1e-14);
        assert_eq!(ev.retained, vec![0, 1, 2, 3]);
    }

    #[test]
    fn uniform_distribution_gives_trace() {
        let h = heisenberg_chain(3, -1.0, 0.3, 0.2, false).unwrap();
        let vqc2 = build_hardware_efficient(&AnsatzSpec::new(3, 2, &[Axis::Y, Axis::Z])).unwrap();
        let theta: Vec<f64> = (0..vqc2.n_params()).map(|k| 0.37 * k as f64 - 1.0).collect();
        let dist = ProbDist::new(vec![0.125; 8]).unwrap();
        let ev = model_energy(&vqc2, &theta, &dist, &h, 0.0).unwrap();
        let tr = h.to_dense().unwrap().trace().re / 8.0;
        assert!((ev.energy - tr).abs() < 1e-13);
    }

    #[test]
    fn cutoff_too_high() {
        let h = heisenberg_chain(2, 1.0, 0.0, 0.0, false).unwrap();
        let vqc2 = build_minimal_entropy_circuit(2).unwrap();
        let dist = ProbDist::new(vec![0.25; 4]).unwrap();
        assert!(model_energy(&vqc2, &[0.0; 2], &dist, &h, 0.5).is_err());
    }

    #[test]
    fn sampled_energy_converges() {
        let h = heisenberg_chain(2, -1.0, 0.3, 0.2, false).unwrap();
        let vqc2 = build_hardware_efficient(&AnsatzSpec::new(2, 1, &[Axis::Y])).unwrap();
        let theta = [0.4, -0.9, 1.3, 0.2];
        let dist = ProbDist::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        let exact = model_energy(&vqc2, &theta, &dist, &h, 0.0).unwrap().energy;
        let counts = sample_counts(&dist, 400_000, 5).unwrap();
        let est = sampled_energy(&vqc2, &theta, &counts, &h, 6).unwrap();
        assert!((est - exact).abs() < 0.02, "{est} vs {exact}");
        assert_eq!(est, sampled_energy(&vqc2, &theta, &counts, &h, 6).unwrap());
    }
}
