use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::config::{AlphaSweep, AnsatzChoice, BetaSweep, ChainModel, ChainScaling, CircuitSpec, DepthSweep, IterationScaling, PhaseDiagram, RunSettings};
use crate::ansatz::ParameterVector;
use crate::error::Result;
use crate::hamiltonian::{exact_eigensystem, gibbs_state, heisenberg_chain, j1j2_lattice, LatticeSpec, PauliSum};
use crate::metrics::{
    correlations, correlations_from_spectrum, correlations_of_state, delta_k_energy, match_spectrum,
    metric_triple_against, zero_crossings, CorrelationResult, MetricTriple,
};
use crate::optim::Termination;
use crate::sim::Circuit;
use crate::thermalizer::{summarize, MultistartOutcome, QvqtResult, Summary, Thermalizer};

/// One optimization run with its metrics against the exact Gibbs state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: Option<u64>,
    pub free_energy: f64,
    pub energy: f64,
    pub entropy: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub termination: Termination,
    pub grad_max_norm: f64,
    pub min_evaluated_free_energy: f64,
    pub metrics: MetricTriple,
    pub params: ParameterVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub delta_f: Summary,
    pub infidelity: Summary,
    pub trace_distance: Summary,
}

/// Multistart at one sweep point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchResult {
    pub n_params: usize,
    pub exact_free_energy: f64,
    pub metrics: MetricSummary,
    pub failed_runs: usize,
    /// Index into `runs` of the lowest free energy.
    pub best_run: usize,
    pub runs: Vec<RunRecord>,
}

impl BatchResult {
    pub fn best(&self) -> &RunRecord {
        &self.runs[self.best_run]
    }
}

fn worst_case() -> MetricTriple {
    MetricTriple { delta_f: f64::INFINITY, infidelity: f64::INFINITY, trace_distance: f64::INFINITY }
}

/// Multistart of `(vqc1, vqc2)` on `h` at `beta`, scored against the exact
/// Gibbs state. Failed runs score `+inf` on every metric.
pub fn run_batch(
    vqc1: Circuit,
    vqc2: Circuit,
    h: &PauliSum,
    beta: f64,
    run: &RunSettings,
) -> Result<(Thermalizer, MultistartOutcome, BatchResult)> {
    let n_params = vqc1.n_params() + vqc2.n_params();
    let th = Thermalizer::new(vqc1, vqc2, h.clone(), run.qvqt(beta))?;
    let out = th.multistart()?;
    let oracle = gibbs_state(&exact_eigensystem(h)?, beta)?;
    let h_dense = h.to_dense()?;
    let runs = out
        .runs
        .iter()
        .map(|r| {
            let metrics = if r.failed() {
                worst_case()
            } else {
                metric_triple_against(&th.model_density(&r.params)?, &h_dense, &oracle)?
            };
            Ok(record(r, metrics))
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |f: fn(&MetricTriple) -> f64| summarize(&runs.iter().map(|r| f(&r.metrics)).collect::<Vec<_>>());
    let batch = BatchResult {
        n_params,
        exact_free_energy: oracle.free_energy,
        metrics: MetricSummary {
            delta_f: col(|m| m.delta_f),
            infidelity: col(|m| m.infidelity),
            trace_distance: col(|m| m.trace_distance),
        },
        failed_runs: out.failed,
        best_run: out.best_index,
        runs,
    };
    Ok((th, out, batch))
}

fn record(r: &QvqtResult, metrics: MetricTriple) -> RunRecord {
    RunRecord {
        seed: r.seed,
        free_energy: r.ranked_free_energy(),
        energy: r.energy,
        entropy: r.entropy,
        iterations: r.iterations,
        evaluations: r.evaluations,
        termination: r.termination,
        grad_max_norm: r.grad_max_norm,
        min_evaluated_free_energy: r.min_evaluated_free_energy,
        metrics,
        params: r.params.clone(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnsatzPoint {
    pub label: String,
    pub batch: BatchResult,
}

fn ansatz_sweep(model: &ChainModel, beta: f64, grid: &[AnsatzChoice], run: &RunSettings) -> Result<Vec<AnsatzPoint>> {
    let h = model.hamiltonian()?;
    grid.iter()
        .map(|a| {
            let (v1, v2) = a.build(model.n_sites)?;
            let (_, _, batch) = run_batch(v1, v2, &h, beta, run)?;
            Ok(AnsatzPoint { label: a.label.clone(), batch })
        })
        .collect()
}

/// Metrics against circuit size on the chain.
pub fn run_e1_depth_sweep(cfg: &DepthSweep) -> Result<Vec<AnsatzPoint>> {
    ansatz_sweep(&cfg.model, cfg.beta, &cfg.ansatz_grid, &cfg.run)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BetaPoint {
    pub beta: f64,
    pub reference: bool,
    pub batch: BatchResult,
}

/// Metrics against inverse temperature at a fixed ansatz.
pub fn run_e2_beta_sweep(cfg: &BetaSweep) -> Result<Vec<BetaPoint>> {
    let h = cfg.model.hamiltonian()?;
    cfg.grid()
        .into_iter()
        .map(|beta| {
            let (v1, v2) = cfg.ansatz.build(cfg.model.n_sites)?;
            let (_, _, batch) = run_batch(v1, v2, &h, beta, &cfg.run)?;
            Ok(BetaPoint { beta, reference: (beta - cfg.reference_beta).abs() < 1e-12, batch })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationPoint {
    pub label: String,
    pub n_params: usize,
    pub mean_iterations: f64,
    /// `2 n_var + 1` circuits per gradient.
    pub circuits_per_gradient: usize,
    /// Mean over runs of `iterations * (2 n_var + 1)`.
    pub circuit_evaluations: f64,
    pub converged_fraction: f64,
    /// Linear-fit prediction and residual of `mean_iterations`.
    pub fitted_iterations: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationScalingResult {
    pub points: Vec<IterationPoint>,
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

/// Least-squares `y = a + b x`; `(b, a)`. A single point gives slope 0.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Optimizer iterations against parameter count.
pub fn run_e3_iteration_scaling(cfg: &IterationScaling) -> Result<IterationScalingResult> {
    let sweep = ansatz_sweep(&cfg.model, cfg.beta, &cfg.ansatz_grid, &cfg.run)?;
    let mut points: Vec<IterationPoint> = sweep
        .iter()
        .map(|p| {
            let runs = &p.batch.runs;
            let n = runs.len() as f64;
            let per_gradient = 2 * p.batch.n_params + 1;
            let mean_iterations = runs.iter().map(|r| r.iterations as f64).sum::<f64>() / n;
            IterationPoint {
                label: p.label.clone(),
                n_params: p.batch.n_params,
                mean_iterations,
                circuits_per_gradient: per_gradient,
                circuit_evaluations: runs.iter().map(|r| (r.iterations * per_gradient) as f64).sum::<f64>() / n,
                converged_fraction: runs.iter().filter(|r| r.termination == Termination::Converged).count() as f64 / n,
                fitted_iterations: 0.0,
                residual: 0.0,
            }
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| p.n_params as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_iterations).collect();
    let (slope, intercept) = linear_fit(&xs, &ys);
    let mut ss = 0.0;
    for p in &mut points {
        p.fitted_iterations = intercept + slope * p.n_params as f64;
        p.residual = p.mean_iterations - p.fitted_iterations;
        ss += p.residual * p.residual;
    }
    Ok(IterationScalingResult { rms_residual: (ss / points.len() as f64).sqrt(), points, slope, intercept })
}

/// One J1-J2 angle: best qVQT run, its extracted spectrum and the exact data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaPoint {
    pub alpha: f64,
    /// Correlations of the best run's model state.
    pub qvqt: CorrelationResult,
    pub exact: CorrelationResult,
    pub batch: BatchResult,
    /// Energies of every basis state mapped through the best energy circuit,
    /// ascending, with matching per-state correlations.
    pub spectrum: Vec<f64>,
    pub spectrum_correlations: Vec<CorrelationResult>,
    pub exact_spectrum: Vec<f64>,
    pub exact_spectrum_correlations: Vec<CorrelationResult>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Crossings {
    pub c0: Vec<f64>,
    pub c1: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaSweepResult {
    pub beta: f64,
    pub points: Vec<AlphaPoint>,
    pub qvqt_crossings: Crossings,
    pub exact_crossings: Crossings,
}

/// Zero crossings over an angle grid, closing the loop from the last point
/// back to the first plus `2 pi`. Roots are reduced to `[0, 2 pi)`.
pub fn periodic_zero_crossings(alphas: &[f64], ys: &[f64]) -> Vec<f64> {
    if alphas.len() < 2 {
        return zero_crossings(alphas, ys);
    }
    let mut xs = alphas.to_vec();
    let mut vs = ys.to_vec();
    xs.push(alphas[0] + TAU);
    vs.push(ys[0]);
    let mut roots = zero_crossings(&xs, &vs);
    // the closing point duplicates the first
    if ys[0] == 0.0 {
        roots.pop();
    }
    let mut out: Vec<f64> = roots.into_iter().map(|r| r.rem_euclid(TAU)).collect();
    out.sort_by(f64::total_cmp);
    out
}

fn crossings(alphas: &[f64], cs: &[CorrelationResult]) -> Crossings {
    let c0: Vec<f64> = cs.iter().map(|c| c.c0).collect();
    let c1: Vec<f64> = cs.iter().map(|c| c.c1).collect();
    Crossings { c0: periodic_zero_crossings(alphas, &c0), c1: periodic_zero_crossings(alphas, &c1) }
}

fn per_state_correlations(
    energies_states: impl Iterator<Item = (f64, crate::sim::StateVector)>,
    lattice: &LatticeSpec,
) -> Result<(Vec<f64>, Vec<CorrelationResult>)> {
    let mut e = Vec::new();
    let mut c = Vec::new();
    for (energy, state) in energies_states {
        e.push(energy);
        c.push(correlations_of_state(&state, lattice)?);
    }
    Ok((e, c))
}

/// Correlation functions across the J1-J2 angle grid.
pub fn run_e4_alpha_sweep(cfg: &AlphaSweep) -> Result<AlphaSweepResult> {
    let points = cfg
        .alphas
        .iter()
        .map(|&alpha| {
            let (h, lattice) = j1j2_lattice(alpha)?;
            let (v1, v2) = cfg.ansatz.build(4)?;
            let (th, out, batch) = run_batch(v1, v2, &h, cfg.beta, &cfg.run)?;
            let best = out.best();
            let qvqt = correlations(&th.model_density(&best.params)?, &lattice)?;
            let es = exact_eigensystem(&h)?;
            let exact = correlations(&gibbs_state(&es, cfg.beta)?.gibbs, &lattice)?;
            let all: Vec<usize> = (0..16).collect();
            let mapped = th.map_basis_states(best, &all)?;
            let (spectrum, spectrum_correlations) =
                per_state_correlations(mapped.into_iter().map(|s| (s.energy, s.state)), &lattice)?;
            let (exact_spectrum, exact_spectrum_correlations) = per_state_correlations(
                (0..es.dim()).map(|i| (es.eigenvalues()[i], es.eigenvector(i))),
                &lattice,
            )?;
            Ok(AlphaPoint {
                alpha,
                qvqt,
                exact,
                batch,
                spectrum,
                spectrum_correlations,
                exact_spectrum,
                exact_spectrum_correlations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let q: Vec<_> = points.iter().map(|p| p.qvqt).collect();
    let x: Vec<_> = points.iter().map(|p| p.exact).collect();
    Ok(AlphaSweepResult {
        beta: cfg.beta,
        qvqt_crossings: crossings(&cfg.alphas, &q),
        exact_crossings: crossings(&cfg.alphas, &x),
        points,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PhasePoint {
    pub alpha: f64,
    pub temperature: f64,
    pub qvqt: CorrelationResult,
    pub exact: CorrelationResult,
    /// `|c0_exact - c0_qvqt| + |c1_exact - c1_qvqt|`.
    pub delta_c: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TemperatureCrossings {
    pub temperature: f64,
    pub qvqt: Crossings,
    pub exact: Crossings,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseDiagramResult {
    pub points: Vec<PhasePoint>,
    pub crossings: Vec<TemperatureCrossings>,
    pub median_delta_c: Vec<(f64, f64)>,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Extends an alpha sweep to other temperatures by reweighting the
/// extracted spectra with Boltzmann factors at `1 / T`.
pub fn phase_diagram_from_sweep(sweep: &AlphaSweepResult, temperatures: &[f64]) -> Result<PhaseDiagramResult> {
    let alphas: Vec<f64> = sweep.points.iter().map(|p| p.alpha).collect();
    let mut points = Vec::new();
    let mut crossings_out = Vec::new();
    let mut medians = Vec::new();
    for &t in temperatures {
        let beta = 1.0 / t;
        let mut q = Vec::new();
        let mut x = Vec::new();
        let mut deltas = Vec::new();
        for p in &sweep.points {
            let qc = correlations_from_spectrum(&p.spectrum_correlations, &p.spectrum, beta)?;
            let xc = correlations_from_spectrum(&p.exact_spectrum_correlations, &p.exact_spectrum, beta)?;
            let delta_c = (xc.c0 - qc.c0).abs() + (xc.c1 - qc.c1).abs();
            points.push(PhasePoint { alpha: p.alpha, temperature: t, qvqt: qc, exact: xc, delta_c });
            q.push(qc);
            x.push(xc);
            deltas.push(delta_c);
        }
        crossings_out.push(TemperatureCrossings {
            temperature: t,
            qvqt: crossings(&alphas, &q),
            exact: crossings(&alphas, &x),
        });
        medians.push((t, median(&mut deltas)));
    }
    Ok(PhaseDiagramResult { points, crossings: crossings_out, median_delta_c: medians })
}

pub fn run_e5_phase_diagram(cfg: &PhaseDiagram) -> Result<(AlphaSweepResult, PhaseDiagramResult)> {
    let sweep = run_e4_alpha_sweep(&cfg.alpha_sweep())?;
    let diagram = phase_diagram_from_sweep(&sweep, &cfg.temperatures)?;
    Ok((sweep, diagram))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainPoint {
    pub length: usize,
    pub depth: usize,
    pub n_params: usize,
    pub delta0: Summary,
    pub delta1: Summary,
    /// `(Delta_0 E, Delta_1 E)` of the lowest-free-energy run.
    pub best_run_deltas: (f64, f64),
    pub per_run: Vec<(f64, f64)>,
    pub batch: BatchResult,
}

/// Eigenstate accuracy of the two lowest states against chain length and
/// energy-circuit depth, with a one-rotation entropy circuit.
pub fn run_e6_chain_scaling(cfg: &ChainScaling) -> Result<Vec<ChainPoint>> {
    let mut out = Vec::new();
    for &n in &cfg.lengths {
        let h = heisenberg_chain(n, cfg.j, cfg.jx, cfg.jz, cfg.periodic)?;
        let exact = exact_eigensystem(&h)?.eigenvalues().to_vec();
        for &depth in &cfg.depths {
            let v1 = CircuitSpec::SingleRotation.build(n)?;
            let v2 = CircuitSpec::hardware_efficient(depth, &cfg.rotations).build(n)?;
            let (th, outcome, batch) = run_batch(v1, v2, &h, cfg.beta, &cfg.run)?;
            let per_run = outcome
                .runs
                .iter()
                .map(|r| {
                    if r.failed() {
                        return Ok((f64::INFINITY, f64::INFINITY));
                    }
                    let states = th.map_basis_states(r, &[0, 1])?;
                    let e: Vec<f64> = states.iter().map(|s| s.energy).collect();
                    let p: Vec<f64> = states.iter().map(|s| s.probability).collect();
                    let (e, x, p) = match_spectrum(&e, &p, &exact)?;
                    // a state that is never measured scores worst case
                    let d = |k| delta_k_energy(&e, &x, &p, k, n).unwrap_or(f64::INFINITY);
                    Ok((d(0), d(1)))
                })
                .collect::<Result<Vec<_>>>()?;
            let d0: Vec<f64> = per_run.iter().map(|d| d.0).collect();
            let d1: Vec<f64> = per_run.iter().map(|d| d.1).collect();
            out.push(ChainPoint {
                length: n,
                depth,
                n_params: batch.n_params,
                delta0: summarize(&d0),
                delta1: summarize(&d1),
                best_run_deltas: per_run[outcome.best_index],
                per_run,
                batch,
            });
        }
    }
    Ok(out)
}
