//! Builds a small circuit by hand, applies it, and inspects the result.

use qvqt::hamiltonian::{expectation, PauliSum, PauliTerm};
use qvqt::sim::{basis_state, measure_probabilities, sample_counts, Circuit, Gate};

fn main() -> qvqt::Result<()> {
    // RY on qubit 0 then CX(0 -> 1): a tunable Bell-like state
    let circuit = Circuit::new(2, vec![Gate::ry(0, 0), Gate::cx(0, 1)])?;
    let theta = [std::f64::consts::FRAC_PI_2];
    let state = circuit.apply(&theta, &basis_state(2, 0)?)?;

    for (i, a) in state.amplitudes().iter().enumerate() {
        println!("|{i:02b}>  {:+.4} {:+.4}i", a.re, a.im);
    }

    let probs = measure_probabilities(&state);
    println!("probabilities {:?}", probs.probs());
    println!("1000 shots    {:?}", sample_counts(&probs, 1000, 7)?);

    let mut zz = PauliSum::new(2);
    zz.add_term(PauliTerm::parse(1.0, "ZZ")?)?;
    println!("<ZZ> = {:.6}", expectation(&state, &zz)?);

    let u = circuit.unitary(&theta)?;
    let err = (&u * u.adjoint() - qvqt::sim::CMatrix::identity(4, 4)).norm();
    println!("||U U^dagger - 1|| = {err:.2e}");
    Ok(())
}
