//! Reference solvers: exhaustive enumeration for small instances,
//! greedy construction, and simulated annealing with incremental energy
//! deltas. These give ground truth and competitive baselines for the
//! annealed gradient solver.

use crate::problems::{next_assignment, DiscreteSolution, EnergyModel, ProblemKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Cap on enumerated search spaces: arity^n must not exceed 2^24.
pub const MAX_ENUM_STATES: u64 = 1 << 24;
/// Tighter cap for distribution enumeration (stores one f64 per state).
pub const MAX_BOLTZMANN_STATES: u64 = 1 << 20;

/// Errors from the reference solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum BaselineError {
    TooLarge { states_log2: f64, limit_log2: u32 },
    InvalidConfig(String),
    AuditMismatch { step: usize, incremental: f64, recomputed: f64 },
}

impl fmt::Display for BaselineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaselineError::TooLarge { states_log2, limit_log2 } => write!(
                f,
                "search space has ~2^{states_log2:.1} states, exceeding the 2^{limit_log2} \
                 enumeration limit"
            ),
            BaselineError::InvalidConfig(reason) => write!(f, "invalid configuration: {reason}"),
            BaselineError::AuditMismatch { step, incremental, recomputed } => write!(
                f,
                "incremental energy {incremental} disagrees with recomputed energy {recomputed} \
                 after accepted move at step {step}"
            ),
        }
    }
}

impl std::error::Error for BaselineError {}

fn check_enum_size(n_vars: usize, arity: usize, limit: u64) -> Result<u64, BaselineError> {
    let states_log2 = n_vars as f64 * (arity as f64).log2();
    let limit_log2 = limit.ilog2();
    if states_log2 > limit_log2 as f64 + 1e-9 {
        return Err(BaselineError::TooLarge { states_log2, limit_log2 });
    }
    Ok((arity as u64).pow(n_vars as u32))
}

/// Exhaustive minimum of the penalized energy. Assignments are visited
/// in lexicographic order (index 0 most significant) and ties keep the
/// first, i.e. lexicographically smallest, minimizer.
pub fn brute_force(model: &EnergyModel) -> Result<DiscreteSolution, BaselineError> {
    check_enum_size(model.n_vars(), model.arity(), MAX_ENUM_STATES)?;
    let mut x = vec![0u8; model.n_vars()];
    let mut best = x.clone();
    let mut best_e = model
        .discrete_energy(&x)
        .expect("all-zero assignment is valid");
    while next_assignment(&mut x, model.arity()) {
        let e = model.discrete_energy(&x).expect("enumeration stays in range");
        if e < best_e {
            best_e = e;
            best.copy_from_slice(&x);
        }
    }
    Ok(model.evaluate(best))
}

/// Penalized energy of every assignment, indexed lexicographically
/// (index 0 most significant digit, matching [`index_to_assignment`]).
pub fn enumerate_energies(model: &EnergyModel, limit: u64) -> Result<Vec<f64>, BaselineError> {
    let n_states = check_enum_size(model.n_vars(), model.arity(), limit)?;
    let mut x = vec![0u8; model.n_vars()];
    let mut energies = Vec::with_capacity(n_states as usize);
    loop {
        energies.push(model.discrete_energy(&x).expect("enumeration stays in range"));
        if !next_assignment(&mut x, model.arity()) {
            break;
        }
    }
    debug_assert_eq!(energies.len() as u64, n_states);
    Ok(energies)
}

/// Decodes a lexicographic state index back into an assignment.
pub fn index_to_assignment(mut index: u64, n_vars: usize, arity: usize) -> Vec<u8> {
    let mut x = vec![0u8; n_vars];
    for i in (0..n_vars).rev() {
        x[i] = (index % arity as u64) as u8;
        index /= arity as u64;
    }
    x
}

/// Greedy independent set: repeatedly select a minimum-degree node of
/// the residual graph (uniform random tie-break) and delete its closed
/// neighborhood.
pub fn greedy_mis(model: &EnergyModel) -> Result<DiscreteSolution, BaselineError> {
    greedy_mis_seeded(model, 0)
}

/// [`greedy_mis`] with an explicit tie-break seed.
pub fn greedy_mis_seeded(model: &EnergyModel, seed: u64) -> Result<DiscreteSolution, BaselineError> {
    if model.kind() != ProblemKind::Mis {
        return Err(BaselineError::InvalidConfig(format!(
            "greedy construction requires a mis model, got {}",
            model.kind().name()
        )));
    }
    let graph = model.graph();
    let n = graph.n_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let mut remaining = n;
    let mut x = vec![0u8; n];
    while remaining > 0 {
        let min_deg = (0..n)
            .filter(|&v| alive[v])
            .map(|v| degree[v])
            .min()
            .expect("remaining > 0");
        let candidates: Vec<usize> =
            (0..n).filter(|&v| alive[v] && degree[v] == min_deg).collect();
        let pick = candidates[rng.random_range(0..candidates.len())];
        x[pick] = 1;
        let mut removed = vec![pick];
        for &(u, _) in graph.neighbors(pick) {
            if alive[u as usize] {
                removed.push(u as usize);
            }
        }
        for v in removed {
            alive[v] = false;
            remaining -= 1;
            for &(u, _) in graph.neighbors(v) {
                if alive[u as usize] {
                    degree[u as usize] -= 1;
                }
            }
        }
    }
    Ok(model.evaluate(x))
}

/// Cooling curve for simulated annealing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoolingSchedule {
    /// t_k = t_start * (t_end / t_start)^(k / steps)
    Geometric,
    /// t_k = t_start + (t_end - t_start) * k / steps
    Linear,
}

/// Simulated-annealing configuration. `audit` recomputes the full
/// energy after every accepted move and fails loudly on any mismatch
/// with the incremental bookkeeping; `gibbs` replaces the
/// Metropolis flip with a heat-bath resample of the chosen site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SAConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub schedule: CoolingSchedule,
    pub seed: u64,
    pub gibbs: bool,
    pub audit: bool,
}

impl SAConfig {
    pub fn new(steps: usize) -> SAConfig {
        SAConfig {
            t_start: 2.0,
            t_end: 0.01,
            steps,
            schedule: CoolingSchedule::Geometric,
            seed: 0,
            gibbs: false,
            audit: false,
        }
    }

    pub fn validate(&self) -> Result<(), BaselineError> {
        let bad = |reason: String| Err(BaselineError::InvalidConfig(reason));
        if self.steps == 0 {
            return bad("steps must be at least 1".into());
        }
        if !self.t_start.is_finite() || self.t_start <= 0.0 {
            return bad(format!("t_start must be positive, got {}", self.t_start));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return bad(format!("t_end must be positive, got {}", self.t_end));
        }
        Ok(())
    }

    fn temperature(&self, step: usize) -> f64 {
        let frac = step as f64 / self.steps as f64;
        match self.schedule {
            CoolingSchedule::Geometric => self.t_start * (self.t_end / self.t_start).powf(frac),
            CoolingSchedule::Linear => self.t_start + (self.t_end - self.t_start) * frac,
        }
    }
}

/// Incremental-energy bookkeeping for single-site moves. Maintains
/// whatever aggregate state each problem needs so that the energy change
/// of reassigning one node costs O(degree).
struct MoveEvaluator<'a> {
    model: &'a EnergyModel,
    /// max-clique: current number of selected nodes.
    selected: usize,
    /// partition: nodes per part.
    part_sizes: Vec<usize>,
}

impl<'a> MoveEvaluator<'a> {
    fn new(model: &'a EnergyModel, x: &[u8]) -> MoveEvaluator<'a> {
        let selected = x.iter().filter(|&&b| b == 1).count();
        let part_sizes = match model.kind() {
            ProblemKind::Partition { parts } => {
                let mut sizes = vec![0usize; parts];
                for &b in x {
                    sizes[b as usize] += 1;
                }
                sizes
            }
            _ => Vec::new(),
        };
        MoveEvaluator { model, selected, part_sizes }
    }

    /// Energy change of setting node `i` from `a` to `b`.
    fn delta(&self, x: &[u8], i: usize, a: u8, b: u8) -> f64 {
        if a == b {
            return 0.0;
        }
        let model = self.model;
        let graph = model.graph();
        let lambda = model.lambda();
        let c_i = model.node_weight(i);
        match model.kind() {
            ProblemKind::Mis => {
                // Selecting i adds -c_i plus penalties on selected
                // neighbors; deselecting removes them.
                let sign = if b == 1 { 1.0 } else { -1.0 };
                let mut conflict = 0.0;
                for &(u, w) in graph.neighbors(i) {
                    if x[u as usize] == 1 {
                        conflict += w;
                    }
                }
                sign * (-c_i + lambda * conflict)
            }
            ProblemKind::MaxClique => {
                // Selecting i: objective -c_i, penalty lambda * (s - d_in)
                // where s is the count of other selected nodes and d_in
                // the selected neighbors of i.
                let sign = if b == 1 { 1.0 } else { -1.0 };
                let mut internal = 0.0;
                for &(u, w) in graph.neighbors(i) {
                    if x[u as usize] == 1 {
                        internal += w;
                    }
                }
                let others = if b == 1 { self.selected } else { self.selected - 1 } as f64;
                sign * (-c_i + lambda * (others - internal))
            }
            ProblemKind::MaxCut => {
                // Energy -сut: moving i flips its incident edges' cut
                // status. delta = sum_w over neighbors of (old side
                // match - new side match) ... computed directly.
                let mut delta = 0.0;
                for &(u, w) in graph.neighbors(i) {
                    let same_before = x[u as usize] == a;
                    let same_after = x[u as usize] == b;
                    // Edge contributes -w to the energy while cut.
                    if same_before && !same_after {
                        delta -= w;
                    } else if !same_before && same_after {
                        delta += w;
                    }
                }
                delta
            }
            ProblemKind::Partition { parts } => {
                // Cut term: 2 * sum_w over neighbors leaving/joining.
                let mut cut_delta = 0.0;
                for &(u, w) in graph.neighbors(i) {
                    let xu = x[u as usize];
                    if xu == a {
                        cut_delta += w; // edge becomes cut
                    }
                    if xu == b {
                        cut_delta -= w; // edge becomes internal
                    }
                }
                // Balance term: (target - n_s)^2 changes only for parts
                // a and b.
                let target = graph.n_nodes() as f64 / parts as f64;
                let na = self.part_sizes[a as usize] as f64;
                let nb = self.part_sizes[b as usize] as f64;
                let balance_before = (target - na).powi(2) + (target - nb).powi(2);
                let balance_after = (target - (na - 1.0)).powi(2) + (target - (nb + 1.0)).powi(2);
                2.0 * cut_delta + lambda * (balance_after - balance_before)
            }
            ProblemKind::Coloring { .. } => {
                let mut delta = 0.0;
                for &(u, w) in graph.neighbors(i) {
                    let xu = x[u as usize];
                    if xu == b {
                        delta += w;
                    }
                    if xu == a {
                        delta -= w;
                    }
                }
                delta
            }
        }
    }

    /// Records that the move (i, a -> b) was accepted.
    fn apply(&mut self, i: usize, a: u8, b: u8) {
        let _ = i;
        match self.model.kind() {
            ProblemKind::MaxClique | ProblemKind::Mis => {
                if a == 1 && b != 1 {
                    self.selected -= 1;
                } else if a != 1 && b == 1 {
                    self.selected += 1;
                }
            }
            ProblemKind::Partition { .. } => {
                self.part_sizes[a as usize] -= 1;
                self.part_sizes[b as usize] += 1;
            }
            _ => {}
        }
    }
}

/// Simulated annealing over single-site moves with Metropolis
/// acceptance (or heat-bath resampling when `gibbs` is set). Returns the
/// best state visited.
pub fn sa_solve(model: &EnergyModel, cfg: &SAConfig) -> Result<DiscreteSolution, BaselineError> {
    cfg.validate()?;
    let n = model.n_vars();
    let arity = model.arity() as u8;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x: Vec<u8> = (0..n).map(|_| rng.random_range(0..arity)).collect();
    let mut evaluator = MoveEvaluator::new(model, &x);
    let mut energy = model.discrete_energy(&x).expect("random assignment is valid");
    let mut best = x.clone();
    let mut best_e = energy;

    for step in 0..cfg.steps {
        let t = cfg.temperature(step);
        let i = rng.random_range(0..n);
        let a = x[i];
        let b = if cfg.gibbs {
            // Heat-bath: sample the site's value from its conditional
            // Boltzmann distribution (weights include staying put).
            let deltas: Vec<f64> =
                (0..arity).map(|k| evaluator.delta(&x, i, a, k)).collect();
            let min_d = deltas.iter().cloned().fold(f64::INFINITY, f64::min);
            let weights: Vec<f64> = deltas.iter().map(|d| (-(d - min_d) / t).exp()).collect();
            let total: f64 = weights.iter().sum();
            let mut u = rng.random::<f64>() * total;
            let mut pick = arity - 1;
            for (k, w) in weights.iter().enumerate() {
                if u < *w {
                    pick = k as u8;
                    break;
                }
                u -= w;
            }
            pick
        } else if arity == 2 {
            1 - a
        } else {
            // Uniform over the other arity - 1 values.
            let r = rng.random_range(0..arity - 1);
            if r >= a {
                r + 1
            } else {
                r
            }
        };
        if b == a {
            continue;
        }
        let delta = evaluator.delta(&x, i, a, b);
        let accept = if cfg.gibbs {
            true // the sample already came from the conditional
        } else {
            delta <= 0.0 || rng.random::<f64>() < (-delta / t).exp()
        };
        if accept {
            x[i] = b;
            evaluator.apply(i, a, b);
            energy += delta;
            if cfg.audit {
                let recomputed = model.discrete_energy(&x).expect("state stays in range");
                if (energy - recomputed).abs() > 1e-9 {
                    return Err(BaselineError::AuditMismatch {
                        step,
                        incremental: energy,
                        recomputed,
                    });
                }
            }
            if energy < best_e {
                best_e = energy;
                best.copy_from_slice(&x);
            }
        }
    }
    Ok(model.evaluate(best))
}

/// Exact Boltzmann distribution over all assignments at temperature `t`,
/// indexed lexicographically. The maximum energy offset is subtracted
/// before exponentiation, so extreme temperatures stay finite.
pub fn boltzmann_enumerate(model: &EnergyModel, t: f64) -> Result<Vec<f64>, BaselineError> {
    if !t.is_finite() || t <= 0.0 {
        return Err(BaselineError::InvalidConfig(format!(
            "temperature must be positive and finite, got {t}"
        )));
    }
    let energies = enumerate_energies(model, MAX_BOLTZMANN_STATES)?;
    let min_e = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut probs: Vec<f64> = energies.iter().map(|e| (-(e - min_e) / t).exp()).collect();
    let z: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= z;
    }
    Ok(probs)
}
