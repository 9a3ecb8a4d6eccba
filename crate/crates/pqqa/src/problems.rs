//! Energy models for the five graph problems and their continuous
//! relaxations.
//!
//! Every problem is expressed as an energy `l(x)` to be *minimized* over
//! discrete assignments, with hard constraints folded in as penalty terms
//! weighted by a scalar `lambda`:
//!
//! - independent set: `-c.x + lambda * sum_E w_ij x_i x_j`
//! - max clique:      `-c.x + (lambda/2) * (|x|(|x|-1) - x.A.x)`
//!   (penalizes node pairs selected without an edge between them)
//! - max cut:         `-sum_E w_ij (1 - (2x_i-1)(2x_j-1)) / 2`
//! - balanced k-partition: cut edges counted once per incident part
//!   (twice in total) plus `lambda * sum_s (N/k - n_s)^2`
//! - K-coloring:      conflict count `sum_E w_ij [x_i = x_j]`
//!
//! The relaxation substitutes per-node probabilities (binary problems) or
//! per-node category distributions (partition, coloring) into the same
//! polynomials, multilinearly for indicators: `[x_i = x_j]` becomes
//! `sum_k p_ik p_jk` and `[x_i != x_j, x_i = s or x_j = s]` becomes
//! `p_is (1 - p_js) + p_js (1 - p_is)`. At integral points the relaxed
//! energy equals the discrete energy exactly; the tests enforce this.

use crate::graph::Graph;
use std::fmt;

/// Which problem an [`EnergyModel`] encodes. Partition and coloring carry
/// their category count; the other three are binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Mis,
    MaxClique,
    MaxCut,
    Partition { parts: usize },
    Coloring { colors: usize },
}

impl ProblemKind {
    /// Number of values each variable ranges over.
    pub fn arity(self) -> usize {
        match self {
            ProblemKind::Mis | ProblemKind::MaxClique | ProblemKind::MaxCut => 2,
            ProblemKind::Partition { parts } => parts,
            ProblemKind::Coloring { colors } => colors,
        }
    }

    pub fn is_binary(self) -> bool {
        self.arity() == 2
    }

    /// Penalty weight used when no instance-specific selection is done:
    /// 2 for the set problems, 1 for the partition balance term, 0 where
    /// no constraint exists.
    pub fn default_lambda(self) -> f64 {
        match self {
            ProblemKind::Mis | ProblemKind::MaxClique => 2.0,
            ProblemKind::Partition { .. } => 1.0,
            ProblemKind::MaxCut | ProblemKind::Coloring { .. } => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Mis => "mis",
            ProblemKind::MaxClique => "clique",
            ProblemKind::MaxCut => "maxcut",
            ProblemKind::Partition { .. } => "partition",
            ProblemKind::Coloring { .. } => "coloring",
        }
    }
}

/// Errors from model construction or energy evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    DimensionMismatch { expected: usize, got: usize },
    ValueOutOfRange { index: usize, value: usize, arity: usize },
    BadArity { arity: usize },
    NegativeLambda { lambda: f64 },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            ModelError::ValueOutOfRange { index, value, arity } => {
                write!(f, "assignment[{index}] = {value} outside 0..{arity}")
            }
            ModelError::BadArity { arity } => {
                write!(f, "category count must be in 2..=255, got {arity}")
            }
            ModelError::NegativeLambda { lambda } => {
                write!(f, "penalty weight must be non-negative, got {lambda}")
            }
        }
    }
}

impl std::error::Error for ModelError {}

/// A rounded assignment with its penalized energy and feasibility status.
/// `feasible` holds exactly when the penalty terms vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSolution {
    pub assignment: Vec<u8>,
    pub objective: f64,
    pub penalty_violation: f64,
    pub feasible: bool,
}

/// Problem instance: a graph, the problem kind, and the penalty weight.
/// Node weights default to 1 (uniform set sizes).
#[derive(Debug, Clone)]
pub struct EnergyModel {
    kind: ProblemKind,
    graph: Graph,
    lambda: f64,
    node_weights: Vec<f64>,
}

impl EnergyModel {
    pub fn new(kind: ProblemKind, graph: Graph) -> Result<EnergyModel, ModelError> {
        let lambda = kind.default_lambda();
        EnergyModel::with_lambda(kind, graph, lambda)
    }

    pub fn with_lambda(
        kind: ProblemKind,
        graph: Graph,
        lambda: f64,
    ) -> Result<EnergyModel, ModelError> {
        let arity = kind.arity();
        if !(2..=255).contains(&arity) {
            return Err(ModelError::BadArity { arity });
        }
        if lambda.is_nan() || lambda < 0.0 {
            return Err(ModelError::NegativeLambda { lambda });
        }
        let node_weights = vec![1.0; graph.n_nodes()];
        Ok(EnergyModel { kind, graph, lambda, node_weights })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn set_lambda(&mut self, lambda: f64) -> Result<(), ModelError> {
        if lambda.is_nan() || lambda < 0.0 {
            return Err(ModelError::NegativeLambda { lambda });
        }
        self.lambda = lambda;
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.graph.n_nodes()
    }

    /// Objective weight of one node (1 for the unweighted problems built
    /// by [`EnergyModel::new`]).
    pub fn node_weight(&self, node: usize) -> f64 {
        self.node_weights[node]
    }

    pub fn arity(&self) -> usize {
        self.kind.arity()
    }

    /// Length of a relaxed state vector: N for binary problems, N*K for
    /// categorical ones (row-major, node-by-node).
    pub fn n_coords(&self) -> usize {
        if self.kind.is_binary() {
            self.n_vars()
        } else {
            self.n_vars() * self.arity()
        }
    }

    fn check_assignment(&self, x: &[u8]) -> Result<(), ModelError> {
        if x.len() != self.n_vars() {
            return Err(ModelError::DimensionMismatch { expected: self.n_vars(), got: x.len() });
        }
        let arity = self.arity();
        for (i, &v) in x.iter().enumerate() {
            if v as usize >= arity {
                return Err(ModelError::ValueOutOfRange {
                    index: i,
                    value: v as usize,
                    arity,
                });
            }
        }
        Ok(())
    }

    /// Penalized discrete energy `l(x)`. Lower is better for every
    /// problem; maximization problems enter negated.
    pub fn discrete_energy(&self, x: &[u8]) -> Result<f64, ModelError> {
        self.check_assignment(x)?;
        Ok(self.signed_base_objective(x) + self.lambda * self.penalty_violation_unchecked(x))
    }

    /// The constraint-violation part of the energy, with the lambda
    /// factor divided out. Zero exactly on feasible assignments; the
    /// unconstrained problems (max cut, coloring) always return 0.
    pub fn penalty_violation(&self, x: &[u8]) -> Result<f64, ModelError> {
        self.check_assignment(x)?;
        Ok(self.penalty_violation_unchecked(x))
    }

    fn penalty_violation_unchecked(&self, x: &[u8]) -> f64 {
        // `+ 0.0` turns the empty-sum identity -0.0 into plain zero.
        0.0 + match self.kind {
            ProblemKind::Mis => {
                // Weighted count of edges with both endpoints selected.
                self.graph
                    .edges()
                    .iter()
                    .filter(|e| x[e.u as usize] == 1 && x[e.v as usize] == 1)
                    .map(|e| e.w)
                    .sum()
            }
            ProblemKind::MaxClique => {
                // Selected pairs minus selected edges: the number of
                // missing edges inside the chosen set (weighted).
                let size: f64 = x
                    .iter()
                    .zip(&self.node_weights)
                    .filter(|&(&xi, _)| xi == 1)
                    .map(|(_, &c)| c)
                    .sum();
                let internal: f64 = self
                    .graph
                    .edges()
                    .iter()
                    .filter(|e| x[e.u as usize] == 1 && x[e.v as usize] == 1)
                    .map(|e| e.w)
                    .sum();
                size * (size - 1.0) / 2.0 - internal
            }
            ProblemKind::MaxCut | ProblemKind::Coloring { .. } => 0.0,
            ProblemKind::Partition { parts } => {
                let mut counts = vec![0usize; parts];
                for &xi in x {
                    counts[xi as usize] += 1;
                }
                let ideal = self.n_vars() as f64 / parts as f64;
                counts.iter().map(|&c| (ideal - c as f64).powi(2)).sum()
            }
        }
    }

    /// The objective part of the energy without penalties, signed so that
    /// lower is better (set sizes and cut weights enter negated).
    fn signed_base_objective(&self, x: &[u8]) -> f64 {
        0.0 + match self.kind {
            ProblemKind::Mis | ProblemKind::MaxClique => {
                -x.iter()
                    .zip(&self.node_weights)
                    .filter(|&(&xi, _)| xi == 1)
                    .map(|(_, &c)| c)
                    .sum::<f64>()
            }
            ProblemKind::MaxCut => {
                -self
                    .graph
                    .edges()
                    .iter()
                    .filter(|e| x[e.u as usize] != x[e.v as usize])
                    .map(|e| e.w)
                    .sum::<f64>()
            }
            ProblemKind::Partition { .. } => {
                // Each cut edge is charged once for each incident part.
                2.0 * self
                    .graph
                    .edges()
                    .iter()
                    .filter(|e| x[e.u as usize] != x[e.v as usize])
                    .map(|e| e.w)
                    .sum::<f64>()
            }
            ProblemKind::Coloring { .. } => self
                .graph
                .edges()
                .iter()
                .filter(|e| x[e.u as usize] == x[e.v as usize])
                .map(|e| e.w)
                .sum(),
        }
    }

    /// The quantity a person would report for the problem: independent
    /// set / clique size, cut weight, single-counted partition cut, or
    /// conflict count. Better is larger for the first three, smaller for
    /// the last two.
    pub fn raw_objective(&self, x: &[u8]) -> f64 {
        match self.kind {
            ProblemKind::Mis | ProblemKind::MaxClique => -self.signed_base_objective(x),
            ProblemKind::MaxCut => -self.signed_base_objective(x),
            ProblemKind::Partition { .. } => self.signed_base_objective(x) / 2.0,
            ProblemKind::Coloring { .. } => self.signed_base_objective(x),
        }
    }

    /// Whether larger raw objectives are better for this problem.
    pub fn raw_is_maximized(&self) -> bool {
        matches!(
            self.kind,
            ProblemKind::Mis | ProblemKind::MaxClique | ProblemKind::MaxCut
        )
    }

    /// Evaluates an assignment trusted to be well-formed (as produced by
    /// rounding or enumeration); panics on malformed input.
    pub fn evaluate(&self, assignment: Vec<u8>) -> DiscreteSolution {
        debug_assert!(self.check_assignment(&assignment).is_ok());
        let violation = self.penalty_violation_unchecked(&assignment);
        let objective = self.signed_base_objective(&assignment) + self.lambda * violation;
        DiscreteSolution {
            assignment,
            objective,
            penalty_violation: violation,
            feasible: violation.abs() < 1e-9,
        }
    }

    /// Relaxed energy: the same polynomial evaluated at a fractional
    /// state. Binary problems take `p` of length N; categorical problems
    /// take row-major N*K distributions. The polynomial extends smoothly
    /// outside the box/simplex, which the two-step update relies on.
    pub fn relaxed_energy(&self, p: &[f64]) -> f64 {
        assert_eq!(p.len(), self.n_coords(), "relaxed state has wrong length");
        let graph = &self.graph;
        match self.kind {
            ProblemKind::Mis => {
                let linear: f64 =
                    p.iter().zip(&self.node_weights).map(|(&pi, &c)| c * pi).sum();
                let quad: f64 = graph
                    .edges()
                    .iter()
                    .map(|e| e.w * p[e.u as usize] * p[e.v as usize])
                    .sum();
                -linear + self.lambda * quad
            }
            ProblemKind::MaxClique => {
                let linear: f64 =
                    p.iter().zip(&self.node_weights).map(|(&pi, &c)| c * pi).sum();
                let total: f64 = p.iter().sum();
                let quad: f64 = graph
                    .edges()
                    .iter()
                    .map(|e| e.w * p[e.u as usize] * p[e.v as usize])
                    .sum();
                -linear + self.lambda / 2.0 * (total * (total - 1.0) - 2.0 * quad)
            }
            ProblemKind::MaxCut => graph
                .edges()
                .iter()
                .map(|e| {
                    let (si, sj) = (2.0 * p[e.u as usize] - 1.0, 2.0 * p[e.v as usize] - 1.0);
                    -e.w * (1.0 - si * sj) / 2.0
                })
                .sum(),
            ProblemKind::Partition { parts } => {
                let k = parts;
                let cut: f64 = graph
                    .edges()
                    .iter()
                    .map(|e| {
                        let (i, j) = (e.u as usize * k, e.v as usize * k);
                        let mut acc = 0.0;
                        for s in 0..k {
                            let (pis, pjs) = (p[i + s], p[j + s]);
                            acc += pis * (1.0 - pjs) + pjs * (1.0 - pis);
                        }
                        e.w * acc
                    })
                    .sum();
                let ideal = self.n_vars() as f64 / k as f64;
                let mut balance = 0.0;
                for s in 0..k {
                    let col: f64 = (0..self.n_vars()).map(|i| p[i * k + s]).sum();
                    balance += (ideal - col).powi(2);
                }
                cut + self.lambda * balance
            }
            ProblemKind::Coloring { colors } => {
                let k = colors;
                graph
                    .edges()
                    .iter()
                    .map(|e| {
                        let (i, j) = (e.u as usize * k, e.v as usize * k);
                        let dot: f64 = (0..k).map(|s| p[i + s] * p[j + s]).sum();
                        e.w * dot
                    })
                    .sum()
            }
        }
    }

    /// Gradient of [`relaxed_energy`], written into `out` (same layout as
    /// `p`). Costs O(N + E) for binary problems, O((N + E) * K) for
    /// categorical ones.
    pub fn relaxed_grad(&self, p: &[f64], out: &mut [f64]) {
        assert_eq!(p.len(), self.n_coords(), "relaxed state has wrong length");
        assert_eq!(out.len(), p.len(), "gradient buffer has wrong length");
        let graph = &self.graph;
        match self.kind {
            ProblemKind::Mis => {
                for (o, &c) in out.iter_mut().zip(&self.node_weights) {
                    *o = -c;
                }
                for e in graph.edges() {
                    let (u, v) = (e.u as usize, e.v as usize);
                    out[u] += self.lambda * e.w * p[v];
                    out[v] += self.lambda * e.w * p[u];
                }
            }
            ProblemKind::MaxClique => {
                let total: f64 = p.iter().sum();
                for (o, &c) in out.iter_mut().zip(&self.node_weights) {
                    *o = -c + self.lambda * (total - 0.5);
                }
                for e in graph.edges() {
                    let (u, v) = (e.u as usize, e.v as usize);
                    out[u] -= self.lambda * e.w * p[v];
                    out[v] -= self.lambda * e.w * p[u];
                }
            }
            ProblemKind::MaxCut => {
                out.fill(0.0);
                for e in graph.edges() {
                    let (u, v) = (e.u as usize, e.v as usize);
                    out[u] += e.w * (2.0 * p[v] - 1.0);
                    out[v] += e.w * (2.0 * p[u] - 1.0);
                }
            }
            ProblemKind::Partition { parts } => {
                let k = parts;
                let ideal = self.n_vars() as f64 / k as f64;
                for s in 0..k {
                    let col: f64 = (0..self.n_vars()).map(|i| p[i * k + s]).sum();
                    let g = 2.0 * self.lambda * (col - ideal);
                    for i in 0..self.n_vars() {
                        out[i * k + s] = g;
                    }
                }
                for e in graph.edges() {
                    let (i, j) = (e.u as usize * k, e.v as usize * k);
                    for s in 0..k {
                        out[i + s] += e.w * (1.0 - 2.0 * p[j + s]);
                        out[j + s] += e.w * (1.0 - 2.0 * p[i + s]);
                    }
                }
            }
            ProblemKind::Coloring { colors } => {
                let k = colors;
                out.fill(0.0);
                for e in graph.edges() {
                    let (i, j) = (e.u as usize * k, e.v as usize * k);
                    for s in 0..k {
                        out[i + s] += e.w * p[j + s];
                        out[j + s] += e.w * p[i + s];
                    }
                }
            }
        }
    }
}

/// Solution-quality numbers for reports. Fields are populated where they
/// make sense for the problem and left unset otherwise.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Metrics {
    /// Raw objective divided by a caller-supplied reference value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub apr: Option<f64>,
    /// Max cut: cut weight / node count. Partition: cut edges / edge count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut_ratio: Option<f64>,
    /// `1 - sum_s (1/k - n_s/N)^2`; 1 at a perfectly balanced partition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balanceness: Option<f64>,
    /// Number of monochromatic edges in a coloring.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflicts: Option<usize>,
    /// Independent set size / node count.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_density: Option<f64>,
}

/// Computes the per-problem quality metrics for a solution. `reference`
/// (a best-known raw objective) enables the approximation ratio.
pub fn compute_metrics(
    model: &EnergyModel,
    solution: &DiscreteSolution,
    reference: Option<f64>,
) -> Metrics {
    let x = &solution.assignment;
    let n = model.n_vars() as f64;
    let raw = model.raw_objective(x);
    let apr = reference.map(|r| raw / r);
    let mut metrics =
        Metrics { apr, cut_ratio: None, balanceness: None, conflicts: None, is_density: None };
    match model.kind() {
        ProblemKind::Mis => {
            metrics.is_density = Some(raw / n);
        }
        ProblemKind::MaxClique => {}
        ProblemKind::MaxCut => {
            metrics.cut_ratio = Some(raw / n);
        }
        ProblemKind::Partition { parts } => {
            let cut_edges = model
                .graph()
                .edges()
                .iter()
                .filter(|e| x[e.u as usize] != x[e.v as usize])
                .count();
            let m = model.graph().n_edges();
            metrics.cut_ratio = Some(if m == 0 { 0.0 } else { cut_edges as f64 / m as f64 });
            let mut counts = vec![0usize; parts];
            for &xi in x {
                counts[xi as usize] += 1;
            }
            let dev: f64 = counts
                .iter()
                .map(|&c| (1.0 / parts as f64 - c as f64 / n).powi(2))
                .sum();
            metrics.balanceness = Some(1.0 - dev);
        }
        ProblemKind::Coloring { .. } => {
            let conflicts = model
                .graph()
                .edges()
                .iter()
                .filter(|e| x[e.u as usize] == x[e.v as usize] && e.w != 0.0)
                .count();
            metrics.conflicts = Some(conflicts);
        }
    }
    metrics
}

/// Exhaustive-search cap for [`select_lambda`]: beyond this many states
/// the default penalty weight is returned untested.
const SELECT_LAMBDA_MAX_STATES: f64 = (1u64 << 24) as f64;
const LAMBDA_GRID_STEP: f64 = 0.5;
const LAMBDA_GRID_MAX: f64 = 10.0;

/// Picks the smallest penalty weight from the grid {0.5, 1.0, ..., 10.0}
/// for which *every* global minimizer of the penalized energy is
/// feasible, checked by exhaustive enumeration. Falls back to the
/// problem's default weight when the instance is too large to enumerate
/// or no grid value qualifies.
pub fn select_lambda(model: &EnergyModel) -> f64 {
    let n = model.n_vars();
    let arity = model.arity();
    let states = (arity as f64).powi(n as i32);
    if n > 20 || states > SELECT_LAMBDA_MAX_STATES {
        return model.kind().default_lambda();
    }
    // Enumerate (base objective, violation) once; each grid value then
    // only rescans the table.
    let mut table: Vec<(f64, f64)> = Vec::with_capacity(states as usize);
    let mut x = vec![0u8; n];
    loop {
        let base = model.signed_base_objective(&x);
        let violation = model.penalty_violation_unchecked(&x);
        table.push((base, violation));
        if !next_assignment(&mut x, arity) {
            break;
        }
    }
    let mut grid = Vec::new();
    let mut v = LAMBDA_GRID_STEP;
    while v <= LAMBDA_GRID_MAX + 1e-12 {
        grid.push(v);
        v += LAMBDA_GRID_STEP;
    }
    for &lambda in &grid {
        let mut min_energy = f64::INFINITY;
        for &(base, violation) in &table {
            let e = base + lambda * violation;
            if e < min_energy {
                min_energy = e;
            }
        }
        let all_feasible = table.iter().all(|&(base, violation)| {
            let e = base + lambda * violation;
            e > min_energy + 1e-9 || violation.abs() < 1e-9
        });
        if all_feasible {
            return lambda;
        }
    }
    model.kind().default_lambda()
}

/// Advances `x` to the next assignment in lexicographic order (index 0 is
/// the most significant digit). Returns false after the last one.
pub(crate) fn next_assignment(x: &mut [u8], arity: usize) -> bool {
    for digit in x.iter_mut().rev() {
        if (*digit as usize) + 1 < arity {
            *digit += 1;
            return true;
        }
        *digit = 0;
    }
    false
}
