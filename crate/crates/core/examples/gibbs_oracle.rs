//! Exact thermal properties of the anisotropic Heisenberg chain.

use qvqt::hamiltonian::{exact_eigensystem, gibbs_state, heisenberg_chain};

fn main() -> qvqt::Result<()> {
    let h = heisenberg_chain(4, -1.0, 0.3, 0.2, false)?;
    println!("{} Pauli terms on {} qubits", h.terms().len(), h.n_qubits());

    let es = exact_eigensystem(&h)?;
    println!("spectrum:");
    for e in es.eigenvalues() {
        println!("  {e:+.6}");
    }

    println!("{:>6} {:>10} {:>10} {:>10} {:>8}", "beta", "F", "E", "S", "purity");
    for beta in [0.1, 0.5, 1.0, 1.3, 3.0, 10.0] {
        let g = gibbs_state(&es, beta)?;
        println!(
            "{beta:>6.2} {:>10.5} {:>10.5} {:>10.5} {:>8.4}",
            g.free_energy,
            g.energy,
            g.entropy,
            g.gibbs.purity()
        );
    }
    Ok(())
}
