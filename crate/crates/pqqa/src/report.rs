//! Report types and rendering: a versioned JSON document for single
//! solves and flat CSV for solves and parameter sweeps.
//!
//! Reports echo the full configuration so a run can be reproduced from
//! its output alone. The global best assignment is included; per-run
//! results are summarized by their energies only, to keep files small at
//! large ensemble sizes.

use crate::annealer::{AnnealSchedule, TraceRow};
use crate::gen::InstanceMeta;
use crate::problems::Metrics;
use serde::Serialize;

/// Version stamp written into every JSON report.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Annealing hyperparameters as they appear in reports.
#[derive(Debug, Clone, Serialize)]
pub struct ScheduleEcho {
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub total_steps: usize,
    pub temperature: f64,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub eval_interval: usize,
    pub noise: bool,
}

impl From<&AnnealSchedule> for ScheduleEcho {
    fn from(s: &AnnealSchedule) -> ScheduleEcho {
        ScheduleEcho {
            gamma_min: s.gamma_min,
            gamma_max: s.gamma_max,
            total_steps: s.total_steps,
            temperature: s.temperature,
            learning_rate: s.learning_rate,
            weight_decay: s.weight_decay,
            eval_interval: s.eval_interval,
            noise: s.noise,
        }
    }
}

/// Reference-solver parameters as they appear in reports.
#[derive(Debug, Clone, Serialize)]
pub struct SaEcho {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub schedule: String,
    pub gibbs: bool,
}

/// Everything needed to rerun the solve.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub problem: String,
    pub arity: usize,
    pub lambda: f64,
    pub solver: String,
    pub runs: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comm_strength: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_alpha: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sa: Option<SaEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repair: Option<bool>,
}

/// The graph the solve ran on.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceInfo {
    /// Where the graph came from: `file:<path>` or a generator spec.
    pub source: String,
    pub n_nodes: usize,
    pub n_edges: usize,
    pub total_weight: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<InstanceMeta>,
}

/// Solution block: the global best in full, other runs as energies.
#[derive(Debug, Clone, Serialize)]
pub struct ResultBlock {
    pub best_assignment: Vec<u8>,
    pub best_objective: f64,
    pub best_raw: f64,
    pub penalty_violation: f64,
    pub feasible: bool,
    pub per_run_objectives: Vec<f64>,
    pub n_feasible_runs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_mean_entropy: Option<f64>,
    /// Wall-clock seconds; written as 0 when timing redaction is on so
    /// that repeated runs produce byte-identical files.
    pub wall_time_s: f64,
}

/// Complete single-solve report.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub instance: InstanceInfo,
    pub result: ResultBlock,
    pub metrics: Metrics,
    /// Convergence trace; empty for solvers that do not anneal.
    pub trace: Vec<TraceRow>,
}

impl SolveReport {
    /// Zeroes the wall-time field so identical configurations render to
    /// byte-identical documents.
    pub fn redact_timing(&mut self) {
        self.result.wall_time_s = 0.0;
    }
}

/// Pretty-printed JSON document with a trailing newline.
pub fn render_json(report: &SolveReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

const SOLVE_CSV_HEADER: &str =
    "problem,solver,n_nodes,n_edges,runs,steps,seed,best_objective,best_raw,feasible,apr,wall_time_s";

/// Two-line CSV (header + one row) for a single solve.
pub fn render_csv(report: &SolveReport) -> String {
    let steps = report
        .config
        .schedule
        .as_ref()
        .map(|s| s.total_steps)
        .or_else(|| report.config.sa.as_ref().map(|s| s.steps))
        .unwrap_or(0);
    let apr = report
        .metrics
        .apr
        .map(|v| v.to_string())
        .unwrap_or_default();
    format!(
        "{SOLVE_CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{}\n",
        report.config.problem,
        report.config.solver,
        report.instance.n_nodes,
        report.instance.n_edges,
        report.config.runs,
        steps,
        report.config.seed,
        report.result.best_objective,
        report.result.best_raw,
        report.result.feasible,
        apr,
        report.result.wall_time_s,
    )
}

/// One line of a sweep table: a point on the swept axis evaluated with
/// one seed.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis: String,
    pub value: f64,
    pub seed: u64,
    pub steps: usize,
    pub runs: usize,
    pub best_objective: f64,
    pub best_raw: f64,
    pub apr: Option<f64>,
    pub feasible: bool,
    pub steps_to_99pct: Option<usize>,
}

pub const SWEEP_CSV_HEADER: &str =
    "axis,value,seed,steps,runs,best_objective,best_raw,apr,feasible,steps_to_99pct";

/// CSV table for a sweep, one row per (axis value, seed).
pub fn render_sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let apr = r.apr.map(|v| v.to_string()).unwrap_or_default();
        let s99 = r.steps_to_99pct.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.axis,
            r.value,
            r.seed,
            r.steps,
            r.runs,
            r.best_objective,
            r.best_raw,
            apr,
            r.feasible,
            s99,
        ));
    }
    out
}

/// First trace step whose best energy is within `frac` (relative) of the
/// final best: the earliest step with
/// `best <= final + frac * |final|`. `None` on an empty trace.
pub fn steps_to_fraction(trace: &[TraceRow], frac: f64) -> Option<usize> {
    let last = trace.last()?;
    let threshold = last.best_objective + frac * last.best_objective.abs();
    trace
        .iter()
        .find(|row| row.best_objective <= threshold)
        .map(|row| row.step)
}
