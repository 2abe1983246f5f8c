//! Exact nearest- and next-nearest-neighbour correlations of the 2x2 J1-J2
//! lattice as the coupling angle goes around the circle.

use qvqt::hamiltonian::{exact_eigensystem, gibbs_state, j1j2_couplings, j1j2_lattice};
use qvqt::metrics::{correlations, zero_crossings};

fn main() -> qvqt::Result<()> {
    let beta = 1.0;
    let mut alphas = Vec::new();
    let mut c0s = Vec::new();
    println!("{:>7} {:>7} {:>7} {:>9} {:>9}", "alpha", "J1", "J2", "c0", "c1");
    for k in 0..24 {
        let alpha = std::f64::consts::TAU * k as f64 / 24.0;
        let (h, lattice) = j1j2_lattice(alpha)?;
        let g = gibbs_state(&exact_eigensystem(&h)?, beta)?;
        let c = correlations(&g.gibbs, &lattice)?;
        let (j1, j2) = j1j2_couplings(alpha);
        println!("{alpha:>7.3} {j1:>7.3} {j2:>7.3} {:>9.5} {:>9.5}", c.c0, c.c1);
        alphas.push(alpha);
        c0s.push(c.c0);
    }
    println!("c0 changes sign near alpha = {:?}", zero_crossings(&alphas, &c0s));
    Ok(())
}
