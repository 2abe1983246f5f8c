use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{ExperimentConfig, ExperimentId};
use super::run::{
    AlphaSweepResult, AnsatzPoint, BatchResult, BetaPoint, ChainPoint, IterationScalingResult, PhaseDiagramResult,
};
use crate::error::Result;
use crate::thermalizer::Summary;

/// A CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            // Debug gives the shortest round-trip form, with exponents when small
            Cell::Num(v) => write!(f, "{v:?}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem, e.g. `E5_phase_diagram_crossings`.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Data section only: header line plus rows.
    pub fn data_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Tables plus the per-run JSON record of one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub id: ExperimentId,
    pub tables: Vec<Table>,
    pub records: serde_json::Value,
}

/// SHA-256 of the compact JSON form of the config.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn stat_rows(summary: [&Summary; 3]) -> [(&'static str, [f64; 3]); 3] {
    let [a, b, c] = summary;
    [
        ("best", [a.best, b.best, c.best]),
        ("p20", [a.p20, b.p20, c.p20]),
        ("mean", [a.mean, b.mean, c.mean]),
    ]
}

fn metric_rows(table: &mut Table, lead: Vec<Cell>, batch: &BatchResult) {
    let m = &batch.metrics;
    for (stat, [df, fm, td]) in stat_rows([&m.delta_f, &m.infidelity, &m.trace_distance]) {
        let mut row = lead.clone();
        row.extend([
            Cell::from(stat),
            df.into(),
            fm.into(),
            td.into(),
            batch.failed_runs.into(),
            batch.runs.len().into(),
        ]);
        table.push(row);
    }
}

const METRIC_COLUMNS: [&str; 6] = ["statistic", "delta_f", "infidelity", "trace_distance", "failed_runs", "n_runs"];

fn with_metrics(lead: &[&'static str]) -> Vec<&'static str> {
    lead.iter().copied().chain(METRIC_COLUMNS).collect()
}

pub(crate) fn e1_output(points: &[AnsatzPoint]) -> ExperimentOutput {
    let id = ExperimentId::E1DepthSweep;
    let mut t = Table::new(id.as_str(), &with_metrics(&["label", "n_params"]));
    for p in points {
        metric_rows(&mut t, vec![p.label.as_str().into(), p.batch.n_params.into()], &p.batch);
    }
    ExperimentOutput { id, tables: vec![t], records: to_value(points) }
}

pub(crate) fn e2_output(points: &[BetaPoint]) -> ExperimentOutput {
    let id = ExperimentId::E2BetaSweep;
    let mut t = Table::new(id.as_str(), &with_metrics(&["beta", "reference", "n_params"]));
    for p in points {
        let lead = vec![p.beta.into(), usize::from(p.reference).into(), p.batch.n_params.into()];
        metric_rows(&mut t, lead, &p.batch);
    }
    ExperimentOutput { id, tables: vec![t], records: to_value(points) }
}

pub(crate) fn e3_output(res: &IterationScalingResult) -> ExperimentOutput {
    let id = ExperimentId::E3IterationScaling;
    let mut t = Table::new(
        id.as_str(),
        &[
            "label",
            "n_params",
            "mean_iterations",
            "circuits_per_gradient",
            "circuit_evaluations",
            "converged_fraction",
            "fitted_iterations",
            "fit_residual",
        ],
    );
    for p in &res.points {
        t.push(vec![
            p.label.as_str().into(),
            p.n_params.into(),
            p.mean_iterations.into(),
            p.circuits_per_gradient.into(),
            p.circuit_evaluations.into(),
            p.converged_fraction.into(),
            p.fitted_iterations.into(),
            p.residual.into(),
        ]);
    }
    ExperimentOutput { id, tables: vec![t], records: to_value(res) }
}

fn crossing_rows(t: &mut Table, lead: &[Cell], source: &str, c: &super::run::Crossings) {
    for (quantity, roots) in [("c0", &c.c0), ("c1", &c.c1)] {
        for &r in roots.iter() {
            let mut row = lead.to_vec();
            row.extend([Cell::from(quantity), source.into(), r.into()]);
            t.push(row);
        }
    }
}

pub(crate) fn e4_output(res: &AlphaSweepResult) -> ExperimentOutput {
    let id = ExperimentId::E4AlphaSweep;
    let mut t = Table::new(
        id.as_str(),
        &["alpha", "c0_qvqt", "c1_qvqt", "c0_exact", "c1_exact", "free_energy_best", "free_energy_exact", "infidelity_best"],
    );
    for p in &res.points {
        t.push(vec![
            p.alpha.into(),
            p.qvqt.c0.into(),
            p.qvqt.c1.into(),
            p.exact.c0.into(),
            p.exact.c1.into(),
            p.batch.best().free_energy.into(),
            p.batch.exact_free_energy.into(),
            p.batch.best().metrics.infidelity.into(),
        ]);
    }
    let mut c = Table::new(format!("{}_crossings", id.as_str()), &["quantity", "source", "alpha"]);
    crossing_rows(&mut c, &[], "qvqt", &res.qvqt_crossings);
    crossing_rows(&mut c, &[], "exact", &res.exact_crossings);
    ExperimentOutput { id, tables: vec![t, c], records: to_value(res) }
}

pub(crate) fn e5_output(sweep: &AlphaSweepResult, diagram: &PhaseDiagramResult) -> ExperimentOutput {
    let id = ExperimentId::E5PhaseDiagram;
    let mut t = Table::new(
        id.as_str(),
        &["alpha", "temperature", "c0_qvqt", "c1_qvqt", "c0_exact", "c1_exact", "delta_c"],
    );
    for p in &diagram.points {
        t.push(vec![
            p.alpha.into(),
            p.temperature.into(),
            p.qvqt.c0.into(),
            p.qvqt.c1.into(),
            p.exact.c0.into(),
            p.exact.c1.into(),
            p.delta_c.into(),
        ]);
    }
    let mut c = Table::new(format!("{}_crossings", id.as_str()), &["temperature", "quantity", "source", "alpha"]);
    for tc in &diagram.crossings {
        crossing_rows(&mut c, &[tc.temperature.into()], "qvqt", &tc.qvqt);
        crossing_rows(&mut c, &[tc.temperature.into()], "exact", &tc.exact);
    }
    let records = serde_json::json!({ "alpha_sweep": to_value(sweep), "phase_diagram": to_value(diagram) });
    ExperimentOutput { id, tables: vec![t, c], records }
}

pub(crate) fn e6_output(points: &[ChainPoint]) -> ExperimentOutput {
    let id = ExperimentId::E6ChainScaling;
    let mut t = Table::new(id.as_str(), &["length", "depth", "n_params", "statistic", "delta0_e", "delta1_e"]);
    for p in points {
        let rows = [
            ("best", p.delta0.best, p.delta1.best),
            ("p20", p.delta0.p20, p.delta1.p20),
            ("mean", p.delta0.mean, p.delta1.mean),
            ("best_run", p.best_run_deltas.0, p.best_run_deltas.1),
        ];
        for (stat, d0, d1) in rows {
            t.push(vec![p.length.into(), p.depth.into(), p.n_params.into(), stat.into(), d0.into(), d1.into()]);
        }
    }
    ExperimentOutput { id, tables: vec![t], records: to_value(points) }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("results serialize")
}

/// Full CSV text: `#` metadata lines followed by the data section.
pub fn render_csv(table: &Table, cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# experiment: {}", cfg.id());
    let _ = writeln!(s, "# config_sha256: {}", config_hash(cfg));
    let _ = writeln!(s, "# master_seed: {}", cfg.master_seed());
    let _ = writeln!(s, "# version: {}", env!("CARGO_PKG_VERSION"));
    s.push_str(&table.data_csv());
    s
}

/// Writes `<dir>/<table>.csv` for every table and `<dir>/<id>.json` with the
/// config, per-run records and wall time. Returns the written paths.
pub fn write_output(
    output: &ExperimentOutput,
    cfg: &ExperimentConfig,
    dir: &Path,
    wall_time_seconds: f64,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for table in &output.tables {
        let path = dir.join(format!("{}.csv", table.name));
        std::fs::write(&path, render_csv(table, cfg))?;
        written.push(path);
    }
    let sidecar = serde_json::json!({
        "experiment": output.id,
        "version": env!("CARGO_PKG_VERSION"),
        "config_sha256": config_hash(cfg),
        "master_seed": cfg.master_seed(),
        "wall_time_seconds": wall_time_seconds,
        "config": cfg,
        "results": output.records,
    });
    let path = dir.join(format!("{}.json", output.id));
    std::fs::write(&path, serde_json::to_string_pretty(&sidecar)?)?;
    written.push(path);
    Ok(written)
}
