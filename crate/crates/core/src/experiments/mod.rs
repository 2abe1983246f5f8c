//! The six numerical experiments, driven by JSON configs.
//!
//! Every experiment is deterministic for a fixed config and master seed;
//! multistart runs may execute in parallel but results are collected in
//! sweep order.

mod config;
mod output;
mod run;

pub use config::{
    default_alphas, default_ansatz_grid, default_betas, default_temperatures, AlphaSweep, AnsatzChoice, BetaSweep,
    ChainModel, ChainScaling, CircuitSpec, DepthSweep, ExperimentConfig, ExperimentId, IterationScaling,
    PhaseDiagram, RunSettings,
};
pub use output::{config_hash, render_csv, write_output, Cell, ExperimentOutput, Table};
pub use run::{
    linear_fit, periodic_zero_crossings, phase_diagram_from_sweep, run_batch, run_e1_depth_sweep,
    run_e2_beta_sweep, run_e3_iteration_scaling, run_e4_alpha_sweep, run_e5_phase_diagram, run_e6_chain_scaling,
    AlphaPoint, AlphaSweepResult, AnsatzPoint, BatchResult, BetaPoint, ChainPoint, Crossings, IterationPoint,
    IterationScalingResult, MetricSummary, PhaseDiagramResult, PhasePoint, RunRecord, TemperatureCrossings,
};

use crate::error::Result;

/// Runs whichever experiment `cfg` selects.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    Ok(match cfg {
        ExperimentConfig::DepthSweep(c) => output::e1_output(&run_e1_depth_sweep(c)?),
        ExperimentConfig::BetaSweep(c) => output::e2_output(&run_e2_beta_sweep(c)?),
        ExperimentConfig::IterationScaling(c) => output::e3_output(&run_e3_iteration_scaling(c)?),
        ExperimentConfig::AlphaSweep(c) => output::e4_output(&run_e4_alpha_sweep(c)?),
        ExperimentConfig::PhaseDiagram(c) => {
            let (sweep, diagram) = run_e5_phase_diagram(c)?;
            output::e5_output(&sweep, &diagram)
        }
        ExperimentConfig::ChainScaling(c) => output::e6_output(&run_e6_chain_scaling(c)?),
    })
}
