//! Multistart optimization on the 4-site chain with the reference ansatz pair.
//!
//! Pass the number of starts as the first argument (default 10).

use qvqt::ansatz::reference_pair;
use qvqt::hamiltonian::{exact_eigensystem, gibbs_state, heisenberg_chain};
use qvqt::metrics::metric_triple;
use qvqt::thermalizer::{QvqtConfig, Thermalizer};

fn main() -> qvqt::Result<()> {
    let n_starts = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let beta = 1.3;
    let h = heisenberg_chain(4, -1.0, 0.3, 0.2, false)?;
    let (vqc1, vqc2) = reference_pair(4)?;
    let config = QvqtConfig { n_starts, master_seed: 1, ..QvqtConfig::with_beta(beta) };
    let th = Thermalizer::new(vqc1, vqc2, h.clone(), config)?;
    println!("{} parameters, {} circuits per gradient", th.n_params(), th.circuits_per_gradient());

    let out = th.multistart()?;
    let es = exact_eigensystem(&h)?;
    let exact = gibbs_state(&es, beta)?;
    println!("exact F {:.6}", exact.free_energy);
    println!("best  F {:.6} (run {})", out.best().free_energy, out.best_index);
    println!("mean  F {:.6}, p20 {:.6}, failed {}", out.free_energy.mean, out.free_energy.p20, out.failed);

    let best = out.best();
    let m = metric_triple(&th.model_density(&best.params)?, &h, beta)?;
    println!("dF {:.3e}  1-f {:.3e}  Td {:.3e}", m.delta_f, m.infidelity, m.trace_distance);

    println!("most populated states vs exact spectrum:");
    for (k, s) in th.extract_eigenstates(best, 4)?.iter().enumerate() {
        println!("  p {:.4}  e {:+.5}  (exact e_{k} {:+.5})", s.probability, s.energy, es.eigenvalues()[k]);
    }
    Ok(())
}
