use std::fmt;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::sim::{CMatrix, StateVector, MAX_DENSE_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Weighted tensor product of Pauli letters; `letters[q]` acts on qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    coefficient: f64,
    letters: Vec<Pauli>,
    x_mask: usize,
    z_mask: usize,
    phase: Complex64,
}

impl PauliTerm {
    pub fn new(coefficient: f64, letters: Vec<Pauli>) -> Result<Self> {
        if !coefficient.is_finite() {
            return domain("Pauli coefficient must be finite");
        }
        if letters.len() > usize::BITS as usize - 1 {
            return domain("too many qubits for a Pauli term");
        }
        let (mut x_mask, mut z_mask, mut n_y) = (0usize, 0usize, 0u32);
        for (q, l) in letters.iter().enumerate() {
            match l {
                Pauli::I => {}
                Pauli::X => x_mask |= 1 << q,
                Pauli::Z => z_mask |= 1 << q,
                Pauli::Y => {
                    x_mask |= 1 << q;
                    z_mask |= 1 << q;
                    n_y += 1;
                }
            }
        }
        // Y = i X Z
        let phase = Complex64::new(0.0, 1.0).powu(n_y);
        Ok(Self { coefficient, letters, x_mask, z_mask, phase })
    }

    /// Parses a letter string such as `"XZI"`; character `q` acts on qubit `q`.
    pub fn parse(coefficient: f64, letters: &str) -> Result<Self> {
        let letters = letters
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Domain(format!("bad Pauli letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coefficient, letters)
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Amplitude factor of `P|b> = factor * |b ^ x_mask>`, without the coefficient.
    #[inline]
    fn factor(&self, b: usize) -> Complex64 {
        if (b & self.z_mask).count_ones() % 2 == 1 {
            -self.phase
        } else {
            self.phase
        }
    }

    /// `<psi| P |psi>` of the bare Pauli string (coefficient excluded).
    pub fn pauli_expectation(&self, amps: &[Complex64]) -> f64 {
        let mut acc = 0.0;
        for (b, a) in amps.iter().enumerate() {
            acc += (amps[b ^ self.x_mask].conj() * self.factor(b) * a).re;
        }
        acc
    }

    fn label(&self) -> String {
        self.letters.iter().map(|l| l.as_char()).collect()
    }
}

/// Hermitian operator as a real-weighted sum of Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Adds a term, merging it into an existing term with the same letters.
    /// Zero coefficients are dropped.
    pub fn add_term(&mut self, term: PauliTerm) -> Result<()> {
        if term.letters.len() != self.n_qubits {
            return domain(format!(
                "term has {} letters, sum has {} qubits",
                term.letters.len(),
                self.n_qubits
            ));
        }
        if term.coefficient == 0.0 {
            return Ok(());
        }
        if let Some(existing) = self.terms.iter_mut().find(|t| t.letters == term.letters) {
            existing.coefficient += term.coefficient;
        } else {
            self.terms.push(term);
        }
        Ok(())
    }

    /// `coefficient` times the product of the listed single-qubit letters.
    pub fn add_local(&mut self, coefficient: f64, ops: &[(usize, Pauli)]) -> Result<()> {
        let mut letters = vec![Pauli::I; self.n_qubits];
        for &(q, p) in ops {
            if q >= self.n_qubits {
                return domain(format!("qubit {q} out of range"));
            }
            letters[q] = p;
        }
        self.add_term(PauliTerm::new(coefficient, letters)?)
    }

    /// `coefficient * (X_i X_j + Y_i Y_j + Z_i Z_j)`.
    pub fn add_exchange(&mut self, coefficient: f64, i: usize, j: usize) -> Result<()> {
        if i == j {
            return domain("exchange needs two distinct sites");
        }
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            self.add_local(coefficient, &[(i, p), (j, p)])?;
        }
        Ok(())
    }

    pub fn add_identity(&mut self, coefficient: f64) -> Result<()> {
        self.add_local(coefficient, &[])
    }

    /// `out = H |amps>`.
    pub fn apply_into(&self, amps: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for t in &self.terms {
            for (b, a) in amps.iter().enumerate() {
                out[b ^ t.x_mask] += t.factor(b) * a * t.coefficient;
            }
        }
    }

    /// `<psi|H|psi>` on raw amplitudes.
    pub fn expectation_raw(&self, amps: &[Complex64]) -> f64 {
        self.terms.iter().map(|t| t.coefficient * t.pauli_expectation(amps)).sum()
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(Error::Resource(format!(
                "{} qubits exceeds the dense limit {MAX_DENSE_QUBITS}",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(dim, dim);
        for t in &self.terms {
            for b in 0..dim {
                m[(b ^ t.x_mask, b)] += t.factor(b) * t.coefficient;
            }
        }
        Ok(m)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", t.coefficient, t.label())?;
        }
        Ok(())
    }
}

/// `<state| O |state>`.
pub fn expectation(state: &StateVector, observable: &PauliSum) -> Result<f64> {
    if state.n_qubits() != observable.n_qubits() {
        return domain(format!(
            "state has {} qubits, observable has {}",
            state.n_qubits(),
            observable.n_qubits()
        ));
    }
    Ok(observable.expectation_raw(state.amplitudes()))
}
