use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ansatz::{build_hardware_efficient, build_minimal_entropy_circuit, build_single_rotation_circuit, AnsatzSpec, Entangler};
use crate::error::{Error, Result};
use crate::hamiltonian::{heisenberg_chain, PauliSum};
use crate::sim::{Axis, Circuit};
use crate::thermalizer::{Mode, QvqtConfig};

/// One experiment per config file, selected by the `experiment` key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment")]
pub enum ExperimentConfig {
    #[serde(rename = "E1_depth_sweep")]
    DepthSweep(DepthSweep),
    #[serde(rename = "E2_beta_sweep")]
    BetaSweep(BetaSweep),
    #[serde(rename = "E3_iteration_scaling")]
    IterationScaling(IterationScaling),
    #[serde(rename = "E4_alpha_sweep")]
    AlphaSweep(AlphaSweep),
    #[serde(rename = "E5_phase_diagram")]
    PhaseDiagram(PhaseDiagram),
    #[serde(rename = "E6_chain_scaling")]
    ChainScaling(ChainScaling),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExperimentId {
    #[serde(rename = "E1_depth_sweep")]
    E1DepthSweep,
    #[serde(rename = "E2_beta_sweep")]
    E2BetaSweep,
    #[serde(rename = "E3_iteration_scaling")]
    E3IterationScaling,
    #[serde(rename = "E4_alpha_sweep")]
    E4AlphaSweep,
    #[serde(rename = "E5_phase_diagram")]
    E5PhaseDiagram,
    #[serde(rename = "E6_chain_scaling")]
    E6ChainScaling,
}

impl ExperimentId {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::E1DepthSweep => "E1_depth_sweep",
            Self::E2BetaSweep => "E2_beta_sweep",
            Self::E3IterationScaling => "E3_iteration_scaling",
            Self::E4AlphaSweep => "E4_alpha_sweep",
            Self::E5PhaseDiagram => "E5_phase_diagram",
            Self::E6ChainScaling => "E6_chain_scaling",
        }
    }
}

impl std::fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Heisenberg chain `J sum (XX + YY + ZZ) + sum (Jx X + Jz Z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainModel {
    pub n_sites: usize,
    pub j: f64,
    pub jx: f64,
    pub jz: f64,
    pub periodic: bool,
}

impl Default for ChainModel {
    fn default() -> Self {
        Self { n_sites: 4, j: -1.0, jx: 0.3, jz: 0.2, periodic: false }
    }
}

impl ChainModel {
    pub fn hamiltonian(&self) -> Result<PauliSum> {
        heisenberg_chain(self.n_sites, self.j, self.jx, self.jz, self.periodic)
    }
}

/// Optimizer and multistart settings shared by all experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSettings {
    pub n_starts: usize,
    pub master_seed: u64,
    pub grad_tolerance: f64,
    pub max_iterations: usize,
    pub prob_cutoff: f64,
    /// Output directory when neither `--out` nor the environment sets one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

impl Default for RunSettings {
    fn default() -> Self {
        let q = QvqtConfig::default();
        Self {
            n_starts: q.n_starts,
            master_seed: q.master_seed,
            grad_tolerance: q.grad_tolerance,
            max_iterations: q.max_iterations,
            prob_cutoff: q.prob_cutoff,
            output_dir: None,
        }
    }
}

impl RunSettings {
    pub fn qvqt(&self, beta: f64) -> QvqtConfig {
        QvqtConfig {
            beta,
            prob_cutoff: self.prob_cutoff,
            grad_tolerance: self.grad_tolerance,
            max_iterations: self.max_iterations,
            n_starts: self.n_starts,
            master_seed: self.master_seed,
            mode: Mode::Exact,
        }
    }
}

/// Circuit family for one of the two variational circuits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CircuitSpec {
    /// One RX per qubit.
    Minimal,
    /// One RX on qubit 0.
    SingleRotation,
    HardwareEfficient {
        depth: usize,
        rotations: Vec<Axis>,
        #[serde(default)]
        entangler: Entangler,
        #[serde(default = "yes")]
        final_rotation_layer: bool,
    },
}

fn yes() -> bool {
    true
}

impl CircuitSpec {
    pub fn hardware_efficient(depth: usize, rotations: &[Axis]) -> Self {
        Self::HardwareEfficient {
            depth,
            rotations: rotations.to_vec(),
            entangler: Entangler::Linear,
            final_rotation_layer: true,
        }
    }

    pub fn build(&self, n_qubits: usize) -> Result<Circuit> {
        match self {
            Self::Minimal => build_minimal_entropy_circuit(n_qubits),
            Self::SingleRotation => build_single_rotation_circuit(n_qubits),
            Self::HardwareEfficient { depth, rotations, entangler, final_rotation_layer } => {
                build_hardware_efficient(&AnsatzSpec {
                    n_qubits,
                    depth: *depth,
                    rotations: rotations.clone(),
                    entangler: *entangler,
                    final_rotation_layer: *final_rotation_layer,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzChoice {
    pub label: String,
    pub vqc1: CircuitSpec,
    pub vqc2: CircuitSpec,
}

impl AnsatzChoice {
    /// Depth-2 RY entropy circuit and depth-7 RY+RZ energy circuit
    /// (76 parameters on four qubits).
    pub fn reference() -> Self {
        Self {
            label: "reference".into(),
            vqc1: CircuitSpec::hardware_efficient(2, &[Axis::Y]),
            vqc2: CircuitSpec::hardware_efficient(7, &[Axis::Y, Axis::Z]),
        }
    }

    pub fn build(&self, n_qubits: usize) -> Result<(Circuit, Circuit)> {
        Ok((self.vqc1.build(n_qubits)?, self.vqc2.build(n_qubits)?))
    }

    pub fn n_params(&self, n_qubits: usize) -> Result<usize> {
        let (a, b) = self.build(n_qubits)?;
        Ok(a.n_params() + b.n_params())
    }
}

/// Minimal entropy circuit with growing energy circuits, ending at the
/// 76-parameter reference pair (on four qubits: 8, 20, 36, 52, 76).
pub fn default_ansatz_grid() -> Vec<AnsatzChoice> {
    let mut grid = vec![AnsatzChoice {
        label: "rx+he_y_d0".into(),
        vqc1: CircuitSpec::Minimal,
        vqc2: CircuitSpec::hardware_efficient(0, &[Axis::Y]),
    }];
    for d in [1, 3, 5] {
        grid.push(AnsatzChoice {
            label: format!("rx+he_yz_d{d}"),
            vqc1: CircuitSpec::Minimal,
            vqc2: CircuitSpec::hardware_efficient(d, &[Axis::Y, Axis::Z]),
        });
    }
    grid.push(AnsatzChoice::reference());
    grid
}

/// 13 logarithmic points from 0.1 to 10.
pub fn default_betas() -> Vec<f64> {
    (0..13).map(|k| 10f64.powf(-1.0 + 2.0 * k as f64 / 12.0)).collect()
}

/// `2 pi k / 24`, `k = 0..24`.
pub fn default_alphas() -> Vec<f64> {
    (0..24).map(|k| TAU * k as f64 / 24.0).collect()
}

/// `0.2, 0.4, ..., 4.0`.
pub fn default_temperatures() -> Vec<f64> {
    (1..=20).map(|k| k as f64 / 5.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DepthSweep {
    pub model: ChainModel,
    pub beta: f64,
    pub ansatz_grid: Vec<AnsatzChoice>,
    pub run: RunSettings,
}

impl Default for DepthSweep {
    fn default() -> Self {
        Self { model: ChainModel::default(), beta: 1.3, ansatz_grid: default_ansatz_grid(), run: RunSettings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BetaSweep {
    pub model: ChainModel,
    pub betas: Vec<f64>,
    /// Inserted into the grid if missing and flagged in the output.
    pub reference_beta: f64,
    pub ansatz: AnsatzChoice,
    pub run: RunSettings,
}

impl Default for BetaSweep {
    fn default() -> Self {
        Self {
            model: ChainModel::default(),
            betas: default_betas(),
            reference_beta: 1.3,
            ansatz: AnsatzChoice::reference(),
            run: RunSettings::default(),
        }
    }
}

impl BetaSweep {
    /// The beta grid with the reference point merged in, ascending.
    pub fn grid(&self) -> Vec<f64> {
        let mut g = self.betas.clone();
        if !g.iter().any(|b| (b - self.reference_beta).abs() < 1e-12) {
            g.push(self.reference_beta);
        }
        g.sort_by(f64::total_cmp);
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IterationScaling {
    pub model: ChainModel,
    pub beta: f64,
    pub ansatz_grid: Vec<AnsatzChoice>,
    pub run: RunSettings,
}

impl Default for IterationScaling {
    fn default() -> Self {
        Self { model: ChainModel::default(), beta: 1.3, ansatz_grid: default_ansatz_grid(), run: RunSettings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlphaSweep {
    pub alphas: Vec<f64>,
    pub beta: f64,
    pub ansatz: AnsatzChoice,
    pub run: RunSettings,
}

impl Default for AlphaSweep {
    fn default() -> Self {
        Self { alphas: default_alphas(), beta: 1.0, ansatz: AnsatzChoice::reference(), run: RunSettings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseDiagram {
    pub alphas: Vec<f64>,
    pub temperatures: Vec<f64>,
    /// Optimization temperature is `1 / beta`; other temperatures are
    /// reached by reweighting the extracted spectrum.
    pub beta: f64,
    pub ansatz: AnsatzChoice,
    pub run: RunSettings,
}

impl Default for PhaseDiagram {
    fn default() -> Self {
        Self {
            alphas: default_alphas(),
            temperatures: default_temperatures(),
            beta: 1.0,
            ansatz: AnsatzChoice::reference(),
            run: RunSettings::default(),
        }
    }
}

impl PhaseDiagram {
    pub fn alpha_sweep(&self) -> AlphaSweep {
        AlphaSweep { alphas: self.alphas.clone(), beta: self.beta, ansatz: self.ansatz.clone(), run: self.run.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainScaling {
    pub lengths: Vec<usize>,
    pub depths: Vec<usize>,
    pub rotations: Vec<Axis>,
    pub j: f64,
    pub jx: f64,
    pub jz: f64,
    pub periodic: bool,
    pub beta: f64,
    pub run: RunSettings,
}

impl Default for ChainScaling {
    fn default() -> Self {
        let m = ChainModel::default();
        Self {
            lengths: (3..=7).collect(),
            depths: vec![1, 2, 4, 6],
            rotations: vec![Axis::Y, Axis::Z],
            j: m.j,
            jx: m.jx,
            jz: m.jz,
            periodic: m.periodic,
            beta: 1.3,
            run: RunSettings::default(),
        }
    }
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return config_err(format!("{name} must be positive and finite, got {v}"));
    }
    Ok(())
}

fn check_grid(name: &str, grid: &[f64], positive: bool) -> Result<()> {
    if grid.is_empty() {
        return config_err(format!("{name} grid is empty"));
    }
    for &v in grid {
        if positive {
            check_positive(name, v)?;
        } else if !v.is_finite() {
            return config_err(format!("{name} grid has non-finite entry {v}"));
        }
    }
    Ok(())
}

fn check_run(run: &RunSettings, beta: f64) -> Result<()> {
    run.qvqt(beta).validate().map_err(|e| Error::Config(e.to_string()))
}

fn check_ansatz(a: &AnsatzChoice, n: usize) -> Result<()> {
    a.build(n).map(|_| ()).map_err(|e| Error::Config(format!("ansatz {}: {e}", a.label)))
}

fn check_chain(m: &ChainModel) -> Result<()> {
    m.hamiltonian().map(|_| ()).map_err(|e| Error::Config(e.to_string()))
}

impl ExperimentConfig {
    pub fn id(&self) -> ExperimentId {
        match self {
            Self::DepthSweep(_) => ExperimentId::E1DepthSweep,
            Self::BetaSweep(_) => ExperimentId::E2BetaSweep,
            Self::IterationScaling(_) => ExperimentId::E3IterationScaling,
            Self::AlphaSweep(_) => ExperimentId::E4AlphaSweep,
            Self::PhaseDiagram(_) => ExperimentId::E5PhaseDiagram,
            Self::ChainScaling(_) => ExperimentId::E6ChainScaling,
        }
    }

    /// Default settings for `id`.
    pub fn default_for(id: ExperimentId) -> Self {
        match id {
            ExperimentId::E1DepthSweep => Self::DepthSweep(DepthSweep::default()),
            ExperimentId::E2BetaSweep => Self::BetaSweep(BetaSweep::default()),
            ExperimentId::E3IterationScaling => Self::IterationScaling(IterationScaling::default()),
            ExperimentId::E4AlphaSweep => Self::AlphaSweep(AlphaSweep::default()),
            ExperimentId::E5PhaseDiagram => Self::PhaseDiagram(PhaseDiagram::default()),
            ExperimentId::E6ChainScaling => Self::ChainScaling(ChainScaling::default()),
        }
    }

    pub fn run_settings(&self) -> &RunSettings {
        match self {
            Self::DepthSweep(c) => &c.run,
            Self::BetaSweep(c) => &c.run,
            Self::IterationScaling(c) => &c.run,
            Self::AlphaSweep(c) => &c.run,
            Self::PhaseDiagram(c) => &c.run,
            Self::ChainScaling(c) => &c.run,
        }
    }

    pub fn run_settings_mut(&mut self) -> &mut RunSettings {
        match self {
            Self::DepthSweep(c) => &mut c.run,
            Self::BetaSweep(c) => &mut c.run,
            Self::IterationScaling(c) => &mut c.run,
            Self::AlphaSweep(c) => &mut c.run,
            Self::PhaseDiagram(c) => &mut c.run,
            Self::ChainScaling(c) => &mut c.run,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.run_settings().master_seed
    }

    pub fn set_master_seed(&mut self, seed: u64) {
        self.run_settings_mut().master_seed = seed;
    }

    /// Parses and validates. Missing fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Pretty JSON with every default spelled out.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::DepthSweep(DepthSweep { model, beta, ansatz_grid, run })
            | Self::IterationScaling(IterationScaling { model, beta, ansatz_grid, run }) => {
                check_chain(model)?;
                check_positive("beta", *beta)?;
                check_run(run, *beta)?;
                if ansatz_grid.is_empty() {
                    return config_err("ansatz grid is empty");
                }
                ansatz_grid.iter().try_for_each(|a| check_ansatz(a, model.n_sites))
            }
            Self::BetaSweep(c) => {
                check_chain(&c.model)?;
                check_grid("beta", &c.betas, true)?;
                check_positive("reference_beta", c.reference_beta)?;
                check_run(&c.run, 1.0)?;
                check_ansatz(&c.ansatz, c.model.n_sites)
            }
            Self::AlphaSweep(c) => {
                check_grid("alpha", &c.alphas, false)?;
                check_positive("beta", c.beta)?;
                check_run(&c.run, c.beta)?;
                check_ansatz(&c.ansatz, 4)
            }
            Self::PhaseDiagram(c) => {
                check_grid("alpha", &c.alphas, false)?;
                check_grid("temperature", &c.temperatures, true)?;
                check_positive("beta", c.beta)?;
                check_run(&c.run, c.beta)?;
                check_ansatz(&c.ansatz, 4)
            }
            Self::ChainScaling(c) => {
                if c.lengths.is_empty() || c.depths.is_empty() {
                    return config_err("length and depth grids must be nonempty");
                }
                if c.rotations.is_empty() {
                    return config_err("rotation set is empty");
                }
                if let Some(n) = c.lengths.iter().find(|&&n| !(2..=12).contains(&n)) {
                    return config_err(format!("chain length {n} outside 2..=12"));
                }
                check_positive("beta", c.beta)?;
                check_run(&c.run, c.beta)
            }
        }
    }
}
