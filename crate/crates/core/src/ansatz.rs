//! Builders for the two variational circuits.
//!
//! The first circuit (entropy circuit, parameters `phi`) shapes the
//! measurement distribution; the second (energy circuit, parameters `theta`)
//! rotates measured basis states into approximate eigenstates. Any unitary
//! preserves orthogonality of the basis states, so the energy circuit needs no
//! extra constraint.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sim::{Axis, Circuit, Gate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    /// CX from qubit `i` to `i + 1`.
    #[default]
    Linear,
    /// Linear plus CX from the last qubit back to qubit 0 (for `n > 2`).
    Circular,
}

/// Layered hardware-efficient circuit description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub n_qubits: usize,
    /// Number of (rotation layer, entangling layer) repetitions.
    pub depth: usize,
    pub rotations: Vec<Axis>,
    #[serde(default)]
    pub entangler: Entangler,
    #[serde(default = "default_true")]
    pub final_rotation_layer: bool,
}

fn default_true() -> bool {
    true
}

impl AnsatzSpec {
    pub fn new(n_qubits: usize, depth: usize, rotations: &[Axis]) -> Self {
        Self {
            n_qubits,
            depth,
            rotations: rotations.to_vec(),
            entangler: Entangler::Linear,
            final_rotation_layer: true,
        }
    }

    /// `n * |rotations| * (depth + final layer)`.
    pub fn param_count(&self) -> usize {
        self.n_qubits * self.rotations.len() * (self.depth + usize::from(self.final_rotation_layer))
    }
}

pub fn build_hardware_efficient(spec: &AnsatzSpec) -> Result<Circuit> {
    if spec.rotations.is_empty() {
        return domain("rotation set must not be empty");
    }
    let n = spec.n_qubits;
    let mut gates = Vec::new();
    let mut next = 0usize;
    let mut rotation_layer = |gates: &mut Vec<Gate>| {
        for q in 0..n {
            for &axis in &spec.rotations {
                gates.push(Gate::Rotation { axis, target: q, param: next });
                next += 1;
            }
        }
    };
    for _ in 0..spec.depth {
        rotation_layer(&mut gates);
        for q in 0..n.saturating_sub(1) {
            gates.push(Gate::cx(q, q + 1));
        }
        if spec.entangler == Entangler::Circular && n > 2 {
            gates.push(Gate::cx(n - 1, 0));
        }
    }
    if spec.final_rotation_layer {
        rotation_layer(&mut gates);
    }
    Circuit::new(n, gates)
}

/// One RX per qubit; the measured distribution is a product of Bernoulli
/// distributions.
pub fn build_minimal_entropy_circuit(n_qubits: usize) -> Result<Circuit> {
    Circuit::new(n_qubits, (0..n_qubits).map(|q| Gate::rx(q, q)).collect())
}

/// A single RX on qubit 0; the distribution lives on basis states 0 and 1.
pub fn build_single_rotation_circuit(n_qubits: usize) -> Result<Circuit> {
    Circuit::new(n_qubits, vec![Gate::rx(0, 0)])
}

/// Entropy and energy circuit pair with 76 parameters on four qubits:
/// depth-2 RY layers (12) followed by depth-7 RY+RZ layers (64), both with a
/// final rotation layer and linear CX entanglers.
///
/// The split between the two circuits, the rotation types and the entangler
/// topology are an interpretation; only the depths and the total count are
/// fixed.
pub fn reference_pair(n_qubits: usize) -> Result<(Circuit, Circuit)> {
    let entropy = build_hardware_efficient(&AnsatzSpec::new(n_qubits, 2, &[Axis::Y]))?;
    let energy = build_hardware_efficient(&AnsatzSpec::new(n_qubits, 7, &[Axis::Y, Axis::Z]))?;
    Ok((entropy, energy))
}

/// Angles of both circuits, in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
}

impl ParameterVector {
    pub fn new(phi: Vec<f64>, theta: Vec<f64>) -> Self {
        Self { phi, theta }
    }

    pub fn zeros(n_phi: usize, n_theta: usize) -> Self {
        Self { phi: vec![0.0; n_phi], theta: vec![0.0; n_theta] }
    }

    /// Each angle drawn uniformly from `[-pi, pi]`.
    pub fn random<R: Rng + ?Sized>(n_phi: usize, n_theta: usize, rng: &mut R) -> Self {
        let mut draw = |n: usize| (0..n).map(|_| rng.random_range(-PI..=PI)).collect();
        let phi = draw(n_phi);
        let theta = draw(n_theta);
        Self { phi, theta }
    }

    pub fn len(&self) -> usize {
        self.phi.len() + self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `phi` followed by `theta`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.phi.clone();
        v.extend_from_slice(&self.theta);
        v
    }

    pub fn from_flat(flat: &[f64], n_phi: usize) -> Self {
        Self { phi: flat[..n_phi].to_vec(), theta: flat[n_phi..].to_vec() }
    }

    pub(crate) fn check(&self, vqc1: &Circuit, vqc2: &Circuit) -> Result<()> {
        if self.phi.len() != vqc1.n_params() || self.theta.len() != vqc2.n_params() {
            return domain(format!(
                "parameter lengths ({}, {}) do not match circuits ({}, {})",
                self.phi.len(),
                self.theta.len(),
                vqc1.n_params(),
                vqc2.n_params()
            ));
        }
        Ok(())
    }
}
