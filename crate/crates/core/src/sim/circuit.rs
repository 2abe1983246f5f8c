use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::CMatrix;
use super::state::StateVector;
use crate::error::{domain, Result};

/// Rotation axis of a single-qubit rotation gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    /// `exp(-i theta A / 2)` with `theta = params[param]`.
    Rotation { axis: Axis, target: usize, param: usize },
    Cx { control: usize, target: usize },
}

impl Gate {
    pub fn rx(target: usize, param: usize) -> Self {
        Gate::Rotation { axis: Axis::X, target, param }
    }

    pub fn ry(target: usize, param: usize) -> Self {
        Gate::Rotation { axis: Axis::Y, target, param }
    }

    pub fn rz(target: usize, param: usize) -> Self {
        Gate::Rotation { axis: Axis::Z, target, param }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Cx { control, target }
    }

    pub fn param_index(&self) -> Option<usize> {
        match self {
            Gate::Rotation { param, .. } => Some(*param),
            Gate::Cx { .. } => None,
        }
    }

    /// Applies the gate to raw amplitudes. `amps.len()` must cover every qubit
    /// the gate touches.
    #[inline]
    pub fn apply(&self, params: &[f64], amps: &mut [Complex64]) {
        match *self {
            Gate::Rotation { axis, target, param } => rotate(axis, target, params[param], amps),
            Gate::Cx { control, target } => cx(control, target, amps),
        }
    }

    /// Applies the inverse gate.
    #[inline]
    pub fn apply_inverse(&self, params: &[f64], amps: &mut [Complex64]) {
        match *self {
            Gate::Rotation { axis, target, param } => rotate(axis, target, -params[param], amps),
            Gate::Cx { control, target } => cx(control, target, amps),
        }
    }
}

#[inline]
pub(crate) fn rotate(axis: Axis, target: usize, angle: f64, amps: &mut [Complex64]) {
    let (s, c) = (0.5 * angle).sin_cos();
    let bit = 1usize << target;
    let dim = amps.len();
    // iterate over indices with the target bit clear
    let mut base = 0;
    while base < dim {
        for i in base..base + bit {
            let j = i | bit;
            let a0 = amps[i];
            let a1 = amps[j];
            match axis {
                Axis::X => {
                    // [[c, -is], [-is, c]]
                    amps[i] = Complex64::new(c * a0.re + s * a1.im, c * a0.im - s * a1.re);
                    amps[j] = Complex64::new(c * a1.re + s * a0.im, c * a1.im - s * a0.re);
                }
                Axis::Y => {
                    amps[i] = a0 * c - a1 * s;
                    amps[j] = a0 * s + a1 * c;
                }
                Axis::Z => {
                    let lo = Complex64::new(c, -s);
                    let hi = Complex64::new(c, s);
                    amps[i] = a0 * lo;
                    amps[j] = a1 * hi;
                }
            }
        }
        base += bit << 1;
    }
}

/// `A |psi>` for a single-qubit Pauli `A` on `target`.
#[inline]
pub(crate) fn apply_pauli(axis: Axis, target: usize, amps: &mut [Complex64]) {
    let bit = 1usize << target;
    for i in 0..amps.len() {
        if i & bit != 0 {
            continue;
        }
        let j = i | bit;
        let (a0, a1) = (amps[i], amps[j]);
        match axis {
            Axis::X => {
                amps[i] = a1;
                amps[j] = a0;
            }
            Axis::Y => {
                // Y = [[0, -i], [i, 0]]
                amps[i] = Complex64::new(a1.im, -a1.re);
                amps[j] = Complex64::new(-a0.im, a0.re);
            }
            Axis::Z => amps[j] = -a1,
        }
    }
}

#[inline]
fn cx(control: usize, target: usize, amps: &mut [Complex64]) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

/// Ordered gate list acting on `n_qubits`. Every parameter slot in
/// `0..n_params` is referenced by exactly one rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > super::MAX_STATE_QUBITS {
            return domain(format!("unsupported qubit count {n_qubits}"));
        }
        let mut seen = Vec::new();
        for g in &gates {
            match *g {
                Gate::Rotation { target, param, .. } => {
                    if target >= n_qubits {
                        return domain(format!("rotation target {target} out of range"));
                    }
                    if seen.len() <= param {
                        seen.resize(param + 1, false);
                    }
                    if seen[param] {
                        return domain(format!("parameter {param} is shared by two gates"));
                    }
                    seen[param] = true;
                }
                Gate::Cx { control, target } => {
                    if control >= n_qubits || target >= n_qubits {
                        return domain(format!("cx({control}, {target}) out of range"));
                    }
                    if control == target {
                        return domain("cx control equals target");
                    }
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return domain(format!("parameter slot {missing} is unused"));
        }
        Ok(Self { n_qubits, gates, n_params: seen.len() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return domain(format!(
                "circuit takes {} parameters, got {}",
                self.n_params,
                params.len()
            ));
        }
        Ok(())
    }

    /// `U(params) |state>`.
    pub fn apply(&self, params: &[f64], state: &StateVector) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return domain(format!(
                "state has {} qubits, circuit has {}",
                state.n_qubits(),
                self.n_qubits
            ));
        }
        let mut out = state.clone();
        self.apply_in_place(params, out.amplitudes_mut())?;
        Ok(out)
    }

    /// Applies the circuit to a raw (not necessarily normalized) vector.
    pub fn apply_in_place(&self, params: &[f64], amps: &mut [Complex64]) -> Result<()> {
        self.check_params(params)?;
        if amps.len() != self.dim() {
            return domain(format!("vector length {} != 2^{}", amps.len(), self.n_qubits));
        }
        for g in &self.gates {
            g.apply(params, amps);
        }
        Ok(())
    }

    /// Applies `U(params)^dagger`: reversed gate order, negated angles.
    pub fn apply_inverse_in_place(&self, params: &[f64], amps: &mut [Complex64]) -> Result<()> {
        self.check_params(params)?;
        if amps.len() != self.dim() {
            return domain(format!("vector length {} != 2^{}", amps.len(), self.n_qubits));
        }
        for g in self.gates.iter().rev() {
            g.apply_inverse(params, amps);
        }
        Ok(())
    }

    /// `U(params) |index>` without allocating an intermediate basis state.
    pub fn apply_to_basis(&self, params: &[f64], index: usize) -> Result<StateVector> {
        let state = super::basis_state(self.n_qubits, index)?;
        self.apply(params, &state)
    }

    /// Dense unitary; column `i` is `U |i>`.
    pub fn unitary(&self, params: &[f64]) -> Result<CMatrix> {
        self.check_params(params)?;
        let dim = self.dim();
        let mut u = CMatrix::zeros(dim, dim);
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..dim {
            col.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
            col[i] = Complex64::new(1.0, 0.0);
            self.apply_in_place(params, &mut col)?;
            for (r, a) in col.iter().enumerate() {
                u[(r, i)] = *a;
            }
        }
        Ok(u)
    }
}
