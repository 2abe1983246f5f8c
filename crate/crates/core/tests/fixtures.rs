//! Frozen spectrum and free energy of the 4-site chain `J = -1, Jx = 0.3, Jz = 0.2`.

use nalgebra::DMatrix;
use qvqt::hamiltonian::{exact_eigensystem, exact_free_energy, gibbs_state, heisenberg_chain};
use qvqt::Complex64;

const SPECTRUM: [f64; 16] = [
    -4.442220510185595,
    -3.7211102550928006,
    -3.0000000000000036,
    -2.549537379838989,
    -2.2788897449072034,
    -1.828427124746191,
    -1.557779489814406,
    -1.1073168696533933,
    -0.46410161513775483,
    0.27888974490720136,
    0.9999999999999984,
    1.7211102550927988,
    3.107316869653393,
    3.828427124746189,
    4.549537379838989,
    6.464101615137758,
];

const FREE_ENERGY_BETA_1_3: f64 = -4.881270161684017;

type M = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Operator acting on site `q` of 4, qubit 0 least significant: kron order is
/// site 3 first.
fn site_op(op: &M, q: usize) -> M {
    let id = M::identity(2, 2);
    let mut acc = M::identity(1, 1);
    for site in (0..4).rev() {
        acc = acc.kronecker(if site == q { op } else { &id });
    }
    acc
}

/// Dense chain Hamiltonian from explicit Kronecker products.
fn kron_chain() -> M {
    let x = M::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let y = M::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    let z = M::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    let mut h = M::zeros(16, 16);
    for i in 0..3 {
        for p in [&x, &y, &z] {
            h -= site_op(p, i) * site_op(p, i + 1);
        }
    }
    for i in 0..4 {
        h += site_op(&x, i) * c(0.3, 0.0) + site_op(&z, i) * c(0.2, 0.0);
    }
    h
}

#[test]
fn spectrum_matches_fixture() {
    let h = heisenberg_chain(4, -1.0, 0.3, 0.2, false).unwrap();
    let es = exact_eigensystem(&h).unwrap();
    for (got, want) in es.eigenvalues().iter().zip(SPECTRUM) {
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
}

#[test]
fn fixture_spectrum_matches_trace_moments() {
    // Tr(H^k) = sum_i e_i^k for an independently assembled matrix
    let h = kron_chain();
    let mut power = M::identity(16, 16);
    for k in 1..=6 {
        power = &power * &h;
        let trace = power.trace().re;
        let moment: f64 = SPECTRUM.iter().map(|e| e.powi(k)).sum();
        assert!((trace - moment).abs() < 1e-8 * moment.abs().max(1.0), "k = {k}: {trace} vs {moment}");
    }
}

#[test]
fn free_energy_fixture() {
    let h = heisenberg_chain(4, -1.0, 0.3, 0.2, false).unwrap();
    let es = exact_eigensystem(&h).unwrap();
    let f = exact_free_energy(&es, 1.3).unwrap();
    assert!((f - FREE_ENERGY_BETA_1_3).abs() < 1e-10);
    // direct sum from the frozen spectrum
    let z: f64 = SPECTRUM.iter().map(|e| (-1.3 * e).exp()).sum();
    assert!((f + z.ln() / 1.3).abs() < 1e-10);
    let g = gibbs_state(&es, 1.3).unwrap();
    assert!((g.partition_function - z).abs() < 1e-10 * z);
}
