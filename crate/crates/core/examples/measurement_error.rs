//! Finite-shot error of the thermal energy: simulated against the analytic
//! estimate, and the uniform-sampling baseline.

use qvqt::hamiltonian::{exact_eigensystem, gibbs_state, heisenberg_chain, Pauli, PauliSum};
use qvqt::metrics::{
    eigenstate_sigmas, error_estimate_qvqt, error_estimate_qvqt_leading, error_estimate_uniform,
    monte_carlo_energy_error, ErrorModelInput,
};

fn main() -> qvqt::Result<()> {
    let mut h = PauliSum::new(1);
    h.add_local(1.0, &[(0, Pauli::X)])?;
    h.add_local(1.0, &[(0, Pauli::Z)])?;
    let mc = monte_carlo_energy_error(&h, 1.0, 10_000, 1000, 0)?;
    println!("two-level system, 10^4 shots, 1000 trials");
    println!("  empirical  {:.4e}", mc.empirical);
    println!("  predicted  {:.4e}", mc.predicted);
    println!("  leading    {:.4e}", error_estimate_qvqt_leading(&mc.input));

    let chain = heisenberg_chain(4, -1.0, 0.3, 0.2, false)?;
    let es = exact_eigensystem(&chain)?;
    let sigmas = eigenstate_sigmas(&chain, &es);
    println!("4-site chain, 10^4 shots: uniform vs thermal sampling");
    println!("{:>6} {:>11} {:>11} {:>7}", "beta", "uniform", "qvqt", "ratio");
    for beta in [0.1, 0.5, 1.0, 3.0, 10.0] {
        let g = gibbs_state(&es, beta)?;
        let input = ErrorModelInput {
            sigmas: sigmas.clone(),
            probs: g.probabilities.clone(),
            energies: es.eigenvalues().to_vec(),
            beta,
            shots: 10_000,
            n_qubits: 4,
        };
        let (u, q) = (error_estimate_uniform(&input), error_estimate_qvqt(&input));
        println!("{beta:>6.1} {u:>11.4e} {q:>11.4e} {:>7.2}", u / q);
    }
    Ok(())
}
