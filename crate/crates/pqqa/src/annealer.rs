//! The annealed gradient solver: linear entropy-coefficient schedule,
//! decoupled-weight-decay adaptive updates, Langevin noise, and
//! projection back onto the box or simplex after every step.
//!
//! One step of one run is the two-part "sensitive transition" update:
//!
//! ```text
//! p' = p - eta * adam(grad R) - eta * wd * p + sqrt(2 eta T) * xi
//! p  = project(p')        // clamp for binary, row renormalize for K-ary
//! ```
//!
//! where `R` is the ensemble objective from [`crate::relax`]. The
//! annealing coefficient runs linearly from `gamma_min` (entropy bonus:
//! spread out) to `gamma_max` (entropy penalty: commit) over the step
//! budget.
//!
//! Determinism: every random draw comes from a stream seeded by
//! `(seed, run_index, step)`, so results are bit-identical regardless of
//! how rayon schedules the runs across threads.

use crate::problems::{DiscreteSolution, EnergyModel, ProblemKind};
use crate::relax::{
    clamp_sigma, column_stats, kary_sigma, qqa_grad, CommConfig, EntropyConfig, RelaxedEnsemble,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;
/// Half-width of the interval the initial states are drawn from.
pub const INIT_JITTER: f64 = 0.1;

/// Annealing schedule and update hyperparameters. `eval_interval` rounds
/// and scores the ensemble every so many steps; `noise` toggles the
/// Langevin term (on by default).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub total_steps: usize,
    pub temperature: f64,
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub eval_interval: usize,
    pub noise: bool,
}

impl AnnealSchedule {
    /// Defaults used throughout the experiments: gamma from -2 to 0.1,
    /// T = 0.001, learning rate 0.1 (from the {1, 0.1, 0.01} grid),
    /// weight decay 0.01, evaluation every 1% of the budget.
    pub fn new(total_steps: usize) -> AnnealSchedule {
        AnnealSchedule {
            gamma_min: -2.0,
            gamma_max: 0.1,
            total_steps,
            temperature: 1e-3,
            learning_rate: 0.1,
            weight_decay: 0.01,
            eval_interval: (total_steps / 100).max(1),
            noise: true,
        }
    }

    pub fn validate(&self) -> Result<(), AnnealError> {
        let bad = |reason: String| Err(AnnealError::InvalidConfig(reason));
        if self.total_steps == 0 {
            return bad("total_steps must be at least 1".into());
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return bad(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return bad(format!("temperature must be >= 0, got {}", self.temperature));
        }
        if !self.weight_decay.is_finite() || self.weight_decay < 0.0 {
            return bad(format!("weight decay must be >= 0, got {}", self.weight_decay));
        }
        if !self.gamma_min.is_finite()
            || !self.gamma_max.is_finite()
            || self.gamma_min > self.gamma_max
        {
            return bad(format!(
                "gamma_min {} must be finite and not exceed gamma_max {}",
                self.gamma_min, self.gamma_max
            ));
        }
        if self.eval_interval == 0 {
            return bad("eval_interval must be at least 1".into());
        }
        Ok(())
    }
}

/// Entropy coefficient after `step` of `total_steps` updates, linear
/// between the endpoints: step 0 gives exactly `gamma_min`, the final
/// step exactly `gamma_max` (the two-product form is endpoint-exact).
pub fn gamma_at(schedule: &AnnealSchedule, step: usize) -> f64 {
    let frac = step as f64 / schedule.total_steps as f64;
    schedule.gamma_min * (1.0 - frac) + schedule.gamma_max * frac
}

/// First/second moment estimates plus a gradient scratch buffer, one
/// entry per ensemble coordinate.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step_count: usize,
    grad: Vec<f64>,
}

/// Errors from the annealing loop.
#[derive(Debug, Clone, PartialEq)]
pub enum AnnealError {
    InvalidConfig(String),
    NonFiniteGradient { step: usize },
    WrongProblem { expected: &'static str, got: &'static str },
}

impl fmt::Display for AnnealError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnealError::InvalidConfig(reason) => write!(f, "invalid configuration: {reason}"),
            AnnealError::NonFiniteGradient { step } => {
                write!(f, "gradient became non-finite at step {step}; run aborted")
            }
            AnnealError::WrongProblem { expected, got } => {
                write!(f, "operation requires a {expected} model, got {got}")
            }
        }
    }
}

impl std::error::Error for AnnealError {}

/// splitmix64 finalizer: the standard 64-bit avalanche mix.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream seed for the draws of one run at one step. Step 0 is reserved
/// for initialization.
pub(crate) fn noise_seed(master: u64, run: usize, step: usize) -> u64 {
    mix64(mix64(mix64(master) ^ run as u64) ^ step as u64)
}

/// Draws the initial ensemble: binary states uniform in
/// [0.5 - jitter, 0.5 + jitter], categorical rows uniform with relative
/// jitter and renormalized. Moments start at zero.
pub fn init_ensemble(
    model: &EnergyModel,
    s_runs: usize,
    entropy: EntropyConfig,
    comm: CommConfig,
    seed: u64,
) -> (RelaxedEnsemble, OptimizerState) {
    assert!(s_runs >= 1, "need at least one run");
    let n_vars = model.n_vars();
    let arity = model.arity();
    let n_coords = model.n_coords();
    let mut data = vec![0.0; s_runs * n_coords];
    data.par_chunks_mut(n_coords).enumerate().for_each(|(s, run)| {
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed(seed, s, 0));
        if arity == 2 {
            for p in run.iter_mut() {
                *p = 0.5 - INIT_JITTER + 2.0 * INIT_JITTER * rng.random::<f64>();
            }
        } else {
            for row in run.chunks_mut(arity) {
                let mut sum = 0.0;
                for p in row.iter_mut() {
                    *p = 1.0 + INIT_JITTER * (2.0 * rng.random::<f64>() - 1.0);
                    sum += *p;
                }
                for p in row.iter_mut() {
                    *p /= sum;
                }
            }
        }
    });
    let ens = RelaxedEnsemble {
        data,
        s_runs,
        n_vars,
        arity,
        gamma: f64::NAN,
        entropy,
        comm,
    };
    let opt = OptimizerState {
        m: vec![0.0; s_runs * n_coords],
        v: vec![0.0; s_runs * n_coords],
        step_count: 0,
        grad: vec![0.0; s_runs * n_coords],
    };
    (ens, opt)
}

/// One update of every run: ensemble gradient, bias-corrected adaptive
/// step with decoupled weight decay, Langevin noise, projection. `step`
/// is 1-based; the annealing coefficient used is `gamma_at(schedule,
/// step)`, so the final step applies exactly `gamma_max`.
pub fn qqa_step(
    ens: &mut RelaxedEnsemble,
    opt: &mut OptimizerState,
    model: &EnergyModel,
    schedule: &AnnealSchedule,
    step: usize,
    seed: u64,
) -> Result<(), AnnealError> {
    let n_coords = ens.n_coords();
    let s_runs = ens.s_runs;
    let gamma = gamma_at(schedule, step);
    ens.gamma = gamma;

    // Run-coupling statistics are taken at the pre-update state, in a
    // fixed reduction order.
    let comm_on = s_runs > 1 && ens.comm.comm_strength != 0.0;
    let stats = if comm_on {
        Some(column_stats(&ens.data, s_runs, n_coords))
    } else {
        None
    };
    let comm = ens.comm;

    let bad_grad = AtomicBool::new(false);
    {
        let data = &ens.data;
        let entropy = ens.entropy;
        opt.grad.par_chunks_mut(n_coords).enumerate().for_each(|(s, grad)| {
            let run = &data[s * n_coords..(s + 1) * n_coords];
            qqa_grad(model, run, gamma, entropy, grad);
            if let Some((means, stds)) = &stats {
                for i in 0..n_coords {
                    let dev = run[i] - means[i];
                    grad[i] -= comm.comm_strength * dev / stds[i].max(comm.epsilon_std);
                }
            }
            if grad.iter().any(|g| !g.is_finite()) {
                bad_grad.store(true, Ordering::Relaxed);
            }
        });
    }
    if bad_grad.load(Ordering::Relaxed) {
        return Err(AnnealError::NonFiniteGradient { step });
    }

    opt.step_count += 1;
    let t = opt.step_count as i32;
    let bias1 = 1.0 - ADAM_BETA1.powi(t);
    let bias2 = 1.0 - ADAM_BETA2.powi(t);
    let lr = schedule.learning_rate;
    let wd = schedule.weight_decay;
    let sigma = if schedule.noise {
        (2.0 * lr * schedule.temperature).sqrt()
    } else {
        0.0
    };
    let arity = ens.arity;

    ens.data
        .par_chunks_mut(n_coords)
        .zip(opt.m.par_chunks_mut(n_coords))
        .zip(opt.v.par_chunks_mut(n_coords))
        .zip(opt.grad.par_chunks(n_coords))
        .enumerate()
        .for_each(|(s, (((p_run, m_run), v_run), g_run))| {
            let mut rng = if sigma > 0.0 {
                Some(ChaCha8Rng::seed_from_u64(noise_seed(seed, s, step)))
            } else {
                None
            };
            for i in 0..n_coords {
                let g = g_run[i];
                m_run[i] = ADAM_BETA1 * m_run[i] + (1.0 - ADAM_BETA1) * g;
                v_run[i] = ADAM_BETA2 * v_run[i] + (1.0 - ADAM_BETA2) * g * g;
                let m_hat = m_run[i] / bias1;
                let v_hat = v_run[i] / bias2;
                let mut next =
                    p_run[i] - lr * (m_hat / (v_hat.sqrt() + ADAM_EPS)) - lr * wd * p_run[i];
                if let Some(rng) = rng.as_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    next += sigma * z;
                }
                p_run[i] = next;
            }
            if arity == 2 {
                clamp_sigma(p_run);
            } else {
                kary_sigma(p_run, arity);
            }
        });
    Ok(())
}

/// Rounds every run to a discrete assignment: binary states threshold at
/// 1/2 (exactly 1/2 rounds up), categorical rows take the argmax with
/// lowest-index tie-breaking.
pub fn round_solution(ens: &RelaxedEnsemble, model: &EnergyModel) -> Vec<DiscreteSolution> {
    let n_coords = ens.n_coords();
    ens.data
        .par_chunks(n_coords)
        .map(|run| model.evaluate(round_one(run, ens.n_vars, ens.arity)))
        .collect()
}

fn round_one(run: &[f64], n_vars: usize, arity: usize) -> Vec<u8> {
    if arity == 2 {
        run.iter().map(|&p| if p >= 0.5 { 1u8 } else { 0u8 }).collect()
    } else {
        let mut x = vec![0u8; n_vars];
        for (i, row) in run.chunks(arity).enumerate() {
            let mut best = 0usize;
            for (k, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = k;
                }
            }
            x[i] = best as u8;
        }
        x
    }
}

/// One row of the convergence trace, written at step 0, every
/// `eval_interval` steps, and at the final step.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub gamma: f64,
    pub mean_entropy: f64,
    pub best_objective: f64,
}

/// Outcome of a full annealing run.
#[derive(Debug, Clone)]
pub struct RunReport {
    /// Best solution found by each run individually.
    pub per_run: Vec<DiscreteSolution>,
    /// Best solution across all runs (lowest penalized energy; earliest
    /// run wins ties).
    pub best: DiscreteSolution,
    /// The natural quantity for the problem (set size, cut weight, ...)
    /// of the best solution.
    pub best_raw: f64,
    pub trace: Vec<TraceRow>,
    /// Entropy per node, averaged over runs, at termination.
    pub final_mean_entropy: f64,
    pub wall_time_s: f64,
    pub seed: u64,
}

/// Runs the full annealing loop: `total_steps` updates with periodic
/// rounding and best-so-far tracking. Identical inputs produce identical
/// reports (wall time aside) for any thread count.
pub fn run(
    model: &EnergyModel,
    s_runs: usize,
    schedule: &AnnealSchedule,
    entropy: EntropyConfig,
    comm: CommConfig,
    seed: u64,
) -> Result<RunReport, AnnealError> {
    schedule.validate()?;
    if s_runs == 0 {
        return Err(AnnealError::InvalidConfig("need at least one run".into()));
    }
    let started = Instant::now();
    let (mut ens, mut opt) = init_ensemble(model, s_runs, entropy, comm, seed);

    let mut per_run: Vec<Option<DiscreteSolution>> = vec![None; s_runs];
    let mut trace: Vec<TraceRow> = Vec::new();
    let evaluate = |ens: &RelaxedEnsemble,
                        per_run: &mut Vec<Option<DiscreteSolution>>,
                        trace: &mut Vec<TraceRow>,
                        step: usize,
                        gamma: f64| {
        let rounded = round_solution(ens, model);
        for (slot, candidate) in per_run.iter_mut().zip(rounded) {
            let better = match slot {
                Some(best) => candidate.objective < best.objective,
                None => true,
            };
            if better {
                *slot = Some(candidate);
            }
        }
        let best = per_run
            .iter()
            .map(|s| s.as_ref().expect("evaluated above").objective)
            .fold(f64::INFINITY, f64::min);
        trace.push(TraceRow {
            step,
            gamma,
            mean_entropy: ens.mean_entropy_per_node(),
            best_objective: best,
        });
    };

    evaluate(&ens, &mut per_run, &mut trace, 0, gamma_at(schedule, 0));
    for step in 1..=schedule.total_steps {
        qqa_step(&mut ens, &mut opt, model, schedule, step, seed)?;
        if step % schedule.eval_interval == 0 || step == schedule.total_steps {
            evaluate(&ens, &mut per_run, &mut trace, step, gamma_at(schedule, step));
        }
    }

    let per_run: Vec<DiscreteSolution> =
        per_run.into_iter().map(|s| s.expect("at least one evaluation ran")).collect();
    let best = per_run
        .iter()
        .min_by(|a, b| a.objective.partial_cmp(&b.objective).expect("finite energies"))
        .expect("at least one run")
        .clone();
    let best_raw = model.raw_objective(&best.assignment);
    Ok(RunReport {
        per_run,
        best,
        best_raw,
        final_mean_entropy: ens.mean_entropy_per_node(),
        trace,
        wall_time_s: started.elapsed().as_secs_f64(),
        seed,
    })
}

/// Greedy repair for independent-set solutions: while any edge has both
/// endpoints selected, deselect the node with the most selected
/// neighbors (lowest index on ties). Off by default in the solver; the
/// result is always feasible.
pub fn repair_mis(
    model: &EnergyModel,
    solution: &DiscreteSolution,
) -> Result<DiscreteSolution, AnnealError> {
    if model.kind() != ProblemKind::Mis {
        return Err(AnnealError::WrongProblem {
            expected: "mis",
            got: model.kind().name(),
        });
    }
    let graph = model.graph();
    let mut x = solution.assignment.clone();
    loop {
        let mut worst: Option<(usize, usize)> = None; // (selected-degree, node)
        for v in 0..graph.n_nodes() {
            if x[v] != 1 {
                continue;
            }
            let selected_neighbors = graph
                .neighbors(v)
                .iter()
                .filter(|&&(u, _)| x[u as usize] == 1)
                .count();
            if selected_neighbors > 0 {
                let beats = match worst {
                    Some((d, _)) => selected_neighbors > d,
                    None => true,
                };
                if beats {
                    worst = Some((selected_neighbors, v));
                }
            }
        }
        match worst {
            Some((_, v)) => x[v] = 0,
            None => break,
        }
    }
    Ok(model.evaluate(x))
}
