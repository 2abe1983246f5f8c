use std::f64::consts::TAU;

use super::{Pauli, PauliSum};
use crate::error::{domain, Result};

/// Sites and bond lists of a spin lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    n_sites: usize,
    nn_pairs: Vec<(usize, usize)>,
    nnn_pairs: Vec<(usize, usize)>,
}

impl LatticeSpec {
    pub fn new(
        n_sites: usize,
        nn_pairs: Vec<(usize, usize)>,
        nnn_pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let norm = |&(a, b): &(usize, usize)| (a.min(b), a.max(b));
        for &(a, b) in nn_pairs.iter().chain(&nnn_pairs) {
            if a >= n_sites || b >= n_sites {
                return domain(format!("pair ({a}, {b}) out of range for {n_sites} sites"));
            }
            if a == b {
                return domain(format!("self pair ({a}, {a})"));
            }
        }
        if nn_pairs.iter().map(norm).any(|p| nnn_pairs.iter().map(norm).any(|q| p == q)) {
            return domain("nearest and next-nearest pair lists overlap");
        }
        Ok(Self { n_sites, nn_pairs, nnn_pairs })
    }

    /// Open chain: bonds `(i, i+1)`; `periodic` closes the ring for `n > 2`.
    pub fn chain(n_sites: usize, periodic: bool) -> Result<Self> {
        if n_sites < 2 {
            return domain(format!("a chain needs at least 2 sites, got {n_sites}"));
        }
        let mut nn: Vec<_> = (0..n_sites - 1).map(|i| (i, i + 1)).collect();
        if periodic && n_sites > 2 {
            nn.push((n_sites - 1, 0));
        }
        Self::new(n_sites, nn, Vec::new())
    }

    /// Open 2x2 plaquette, sites numbered row-major:
    ///
    /// ```text
    /// 0 - 1
    /// |   |
    /// 2 - 3
    /// ```
    pub fn square_2x2() -> Self {
        Self {
            n_sites: 4,
            nn_pairs: vec![(0, 1), (2, 3), (0, 2), (1, 3)],
            nnn_pairs: vec![(0, 3), (1, 2)],
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn nn_pairs(&self) -> &[(usize, usize)] {
        &self.nn_pairs
    }

    pub fn nnn_pairs(&self) -> &[(usize, usize)] {
        &self.nnn_pairs
    }
}

/// `J sum_<ij> (XX + YY + ZZ) + sum_i (Jx X_i + Jz Z_i)` on a chain.
pub fn heisenberg_chain(n: usize, j: f64, jx: f64, jz: f64, periodic: bool) -> Result<PauliSum> {
    let lattice = LatticeSpec::chain(n, periodic)?;
    let mut h = PauliSum::new(n);
    for &(a, b) in lattice.nn_pairs() {
        h.add_exchange(j, a, b)?;
    }
    for q in 0..n {
        h.add_local(jx, &[(q, Pauli::X)])?;
        h.add_local(jz, &[(q, Pauli::Z)])?;
    }
    Ok(h)
}

/// `(J1, J2) = (sin alpha, cos alpha)` with `alpha` reduced modulo `2 pi`.
pub fn j1j2_couplings(alpha: f64) -> (f64, f64) {
    let a = alpha.rem_euclid(TAU);
    (a.sin(), a.cos())
}

/// J1-J2 Heisenberg model on the open 2x2 plaquette. Each bond carries the
/// full Pauli exchange `XX + YY + ZZ` (no factor 1/4).
pub fn j1j2_lattice(alpha: f64) -> Result<(PauliSum, LatticeSpec)> {
    let (j1, j2) = j1j2_couplings(alpha);
    let lattice = LatticeSpec::square_2x2();
    let mut h = PauliSum::new(lattice.n_sites());
    for &(a, b) in lattice.nn_pairs() {
        h.add_exchange(j1, a, b)?;
    }
    for &(a, b) in lattice.nnn_pairs() {
        h.add_exchange(j2, a, b)?;
    }
    Ok((h, lattice))
}
