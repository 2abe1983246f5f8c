//! Gradient of the free energy by shifted circuits, by the adjoint sweep, and
//! by finite differences.

use qvqt::ansatz::{build_hardware_efficient, AnsatzSpec};
use qvqt::hamiltonian::heisenberg_chain;
use qvqt::sim::Axis;
use qvqt::thermalizer::{QvqtConfig, Thermalizer};

fn main() -> qvqt::Result<()> {
    let h = heisenberg_chain(3, -1.0, 0.3, 0.2, false)?;
    let vqc1 = build_hardware_efficient(&AnsatzSpec::new(3, 1, &[Axis::Y]))?;
    let vqc2 = build_hardware_efficient(&AnsatzSpec::new(3, 2, &[Axis::Y, Axis::Z]))?;
    let th = Thermalizer::new(vqc1, vqc2, h, QvqtConfig::with_beta(1.0))?;
    let p = th.initial_params(42);
    let n_phi = p.phi.len();

    let shifted = th.gradient_by_shifted_circuits(&p)?;
    let adjoint = th.gradient(&p)?;
    let flat = p.to_flat();
    let eps = 1e-6;
    println!("{:>4} {:>14} {:>14} {:>14}", "k", "shift", "adjoint", "finite diff");
    for k in 0..flat.len() {
        let (mut up, mut dn) = (flat.clone(), flat.clone());
        up[k] += eps;
        dn[k] -= eps;
        let fd = (th.free_energy(&qvqt::ansatz::ParameterVector::from_flat(&up, n_phi))?
            - th.free_energy(&qvqt::ansatz::ParameterVector::from_flat(&dn, n_phi))?)
            / (2.0 * eps);
        println!("{k:>4} {:>14.9} {:>14.9} {fd:>14.9}", shifted[k], adjoint[k]);
    }
    let worst = shifted.iter().zip(&adjoint).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("max |shift - adjoint| = {worst:.2e}");
    Ok(())
}
