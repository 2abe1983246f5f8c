//! Smallest complete run: a single qubit in a transverse field.

use qvqt::ansatz::{build_hardware_efficient, build_minimal_entropy_circuit, AnsatzSpec};
use qvqt::hamiltonian::{exact_eigensystem, gibbs_state, Pauli, PauliSum};
use qvqt::metrics::metric_triple;
use qvqt::sim::Axis;
use qvqt::thermalizer::{QvqtConfig, Thermalizer};

fn main() -> qvqt::Result<()> {
    let mut h = PauliSum::new(1);
    h.add_local(0.8, &[(0, Pauli::X)])?;
    h.add_local(-0.5, &[(0, Pauli::Z)])?;
    let beta = 2.0;

    let vqc1 = build_minimal_entropy_circuit(1)?;
    let vqc2 = build_hardware_efficient(&AnsatzSpec::new(1, 1, &[Axis::Y, Axis::Z]))?;
    let config = QvqtConfig { n_starts: 10, ..QvqtConfig::with_beta(beta) };
    let th = Thermalizer::new(vqc1, vqc2, h.clone(), config)?;

    let out = th.multistart()?;
    let best = out.best();
    let exact = gibbs_state(&exact_eigensystem(&h)?, beta)?;
    println!("F model  {:.8}", best.free_energy);
    println!("F exact  {:.8}", exact.free_energy);
    println!("p        {:?}", best.probabilities);
    println!("p exact  {:?}", exact.probabilities);
    println!("{} iterations, {:?}", best.iterations, best.termination);

    let m = metric_triple(&th.model_density(&best.params)?, &h, beta)?;
    println!("dF {:.2e}  1-f {:.2e}  Td {:.2e}", m.delta_f, m.infidelity, m.trace_distance);
    Ok(())
}
