//! The annealed relaxation: entropy terms, box/simplex projections, and
//! the ensemble objective that couples parallel runs.
//!
//! A binary variable is relaxed to `p in [0, 1]`; a K-ary variable to a
//! row of K probabilities. The annealed objective is
//!
//! ```text
//! r(p) = l(p) + gamma * s(p)
//! ```
//!
//! where `s` is a polynomial entropy: `sum_i (1 - (2 p_i - 1)^alpha)` for
//! binary variables (alpha even), and its K-ary generalization
//! `sum_i (1 - c_K * sum_k (K p_ik - 1)^alpha)` with the normalizer
//! `c_K = 1 / ((K-1) ((K-1)^(alpha-1) + 1))` chosen so one-hot rows score
//! 0 and uniform rows score 1. Negative gamma rewards indecision (the
//! exploration phase); positive gamma forces integrality.
//!
//! An ensemble of S runs adds a diversity bonus: the sum over coordinates
//! of the population standard deviation across runs, scaled by
//! `S * comm_strength`, is subtracted from the summed objectives.

use crate::problems::EnergyModel;
use std::fmt;

/// Entropy shape parameter. `alpha` must be even (odd powers would make
/// the entropy signed) and at least 2; the experiments use 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyConfig {
    pub alpha: u32,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig { alpha: 4 }
    }
}

/// Errors from relaxation configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum RelaxError {
    OddAlpha { alpha: u32 },
    AlphaTooSmall { alpha: u32 },
    CommStrengthOutOfRange { value: f64 },
}

impl fmt::Display for RelaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelaxError::OddAlpha { alpha } => {
                write!(f, "entropy exponent must be even, got {alpha}")
            }
            RelaxError::AlphaTooSmall { alpha } => {
                write!(f, "entropy exponent must be >= 2, got {alpha}")
            }
            RelaxError::CommStrengthOutOfRange { value } => {
                write!(f, "comm strength must be in [0, 1], got {value}")
            }
        }
    }
}

impl std::error::Error for RelaxError {}

impl EntropyConfig {
    pub fn new(alpha: u32) -> Result<EntropyConfig, RelaxError> {
        if alpha < 2 {
            return Err(RelaxError::AlphaTooSmall { alpha });
        }
        if !alpha.is_multiple_of(2) {
            return Err(RelaxError::OddAlpha { alpha });
        }
        Ok(EntropyConfig { alpha })
    }
}

/// Run-coupling parameters. `comm_strength` of 0 decouples the runs;
/// `epsilon_std` guards the standard-deviation gradient near zero spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommConfig {
    pub comm_strength: f64,
    pub epsilon_std: f64,
}

impl Default for CommConfig {
    fn default() -> Self {
        CommConfig { comm_strength: 0.0, epsilon_std: 1e-12 }
    }
}

impl CommConfig {
    pub fn new(comm_strength: f64) -> Result<CommConfig, RelaxError> {
        if !(0.0..=1.0).contains(&comm_strength) || !comm_strength.is_finite() {
            return Err(RelaxError::CommStrengthOutOfRange { value: comm_strength });
        }
        Ok(CommConfig { comm_strength, ..CommConfig::default() })
    }
}

/// The mutable state of S parallel relaxed runs, stored as S consecutive
/// blocks of coordinates (N per run for binary problems, N*K row-major
/// for categorical ones). `gamma` tracks the most recently applied
/// annealing coefficient.
#[derive(Debug, Clone)]
pub struct RelaxedEnsemble {
    pub data: Vec<f64>,
    pub s_runs: usize,
    pub n_vars: usize,
    pub arity: usize,
    pub gamma: f64,
    pub entropy: EntropyConfig,
    pub comm: CommConfig,
}

impl RelaxedEnsemble {
    /// Coordinates per run: N for binary problems, N*K otherwise.
    pub fn n_coords(&self) -> usize {
        if self.arity == 2 {
            self.n_vars
        } else {
            self.n_vars * self.arity
        }
    }

    pub fn run_state(&self, s: usize) -> &[f64] {
        let c = self.n_coords();
        &self.data[s * c..(s + 1) * c]
    }

    /// Entropy per node averaged over runs; approaches 0 as every run
    /// becomes integral.
    pub fn mean_entropy_per_node(&self) -> f64 {
        let c = self.n_coords();
        let per_run: f64 = self
            .data
            .chunks(c)
            .map(|run| {
                if self.arity == 2 {
                    entropy_binary(run, self.entropy)
                } else {
                    entropy_kary(run, self.arity, self.entropy)
                }
            })
            .sum();
        per_run / (self.s_runs as f64 * self.n_vars as f64)
    }
}

/// Elementwise clamp to the unit box. This, not a sigmoid, is the map
/// from update space to probability space: it has slope 1 in the
/// interior, so small energy differences still move the state.
pub fn clamp_sigma(w: &mut [f64]) {
    for x in w.iter_mut() {
        *x = x.clamp(0.0, 1.0);
    }
}

/// Row-wise K-ary normalization: negative entries are clamped to 0 and
/// each row rescaled to sum 1. Rows that clamp to all zeros fall back to
/// the uniform distribution (every direction is equally wrong there).
pub fn kary_sigma(w: &mut [f64], k: usize) {
    assert!(k >= 2, "need at least two categories");
    assert_eq!(w.len() % k, 0, "state length must be a multiple of k");
    for row in w.chunks_mut(k) {
        let mut sum = 0.0;
        for x in row.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
            sum += *x;
        }
        if sum > 0.0 {
            for x in row.iter_mut() {
                *x /= sum;
            }
        } else {
            row.fill(1.0 / k as f64);
        }
    }
}

/// Binary entropy `sum_i (1 - (2 p_i - 1)^alpha)`: 0 at integral points,
/// at most N (attained when every p_i = 1/2).
pub fn entropy_binary(p: &[f64], cfg: EntropyConfig) -> f64 {
    let alpha = cfg.alpha as i32;
    p.iter().map(|&pi| 1.0 - (2.0 * pi - 1.0).powi(alpha)).sum()
}

/// Adds `scale * d(entropy)/dp` to `out`. The derivative of each term is
/// `-2 alpha (2 p_i - 1)^(alpha - 1)`.
pub fn entropy_binary_grad(p: &[f64], cfg: EntropyConfig, scale: f64, out: &mut [f64]) {
    let alpha = cfg.alpha as i32;
    let coeff = -2.0 * cfg.alpha as f64 * scale;
    for (o, &pi) in out.iter_mut().zip(p) {
        *o += coeff * (2.0 * pi - 1.0).powi(alpha - 1);
    }
}

/// Normalizer making the K-ary entropy hit exactly 1 on uniform rows and
/// 0 on one-hot rows.
fn kary_normalizer(k: usize, alpha: u32) -> f64 {
    let km1 = (k - 1) as f64;
    km1 * (km1.powi(alpha as i32 - 1) + 1.0)
}

/// K-ary entropy: `sum_i (1 - c_K * sum_k (K p_ik - 1)^alpha)`. Reduces
/// exactly to [`entropy_binary`] at K = 2, and stays within [0, 1] per
/// row on the probability simplex.
pub fn entropy_kary(p: &[f64], k: usize, cfg: EntropyConfig) -> f64 {
    assert!(k >= 2, "need at least two categories");
    assert_eq!(p.len() % k, 0, "state length must be a multiple of k");
    let alpha = cfg.alpha as i32;
    let norm = kary_normalizer(k, cfg.alpha);
    let kf = k as f64;
    p.chunks(k)
        .map(|row| {
            let raw: f64 = row.iter().map(|&v| (kf * v - 1.0).powi(alpha)).sum();
            1.0 - raw / norm
        })
        .sum()
}

/// Adds `scale * d(entropy_kary)/dp` to `out`.
pub fn entropy_kary_grad(p: &[f64], k: usize, cfg: EntropyConfig, scale: f64, out: &mut [f64]) {
    assert_eq!(p.len() % k, 0, "state length must be a multiple of k");
    assert_eq!(out.len(), p.len());
    let alpha = cfg.alpha as i32;
    let norm = kary_normalizer(k, cfg.alpha);
    let kf = k as f64;
    let coeff = -scale * cfg.alpha as f64 * kf / norm;
    for (o, &v) in out.iter_mut().zip(p) {
        *o += coeff * (kf * v - 1.0).powi(alpha - 1);
    }
}

/// Expected value of a K-ary variable under a category distribution,
/// given the numeric level attached to each category. This is how a
/// K-valued integer variable reads out of its relaxed row.
pub fn expected_level(levels: &[f64], row: &[f64]) -> f64 {
    assert_eq!(levels.len(), row.len());
    levels.iter().zip(row).map(|(&l, &p)| l * p).sum()
}

/// Annealed single-run objective `r(p) = l(p) + gamma * s(p)`.
pub fn qqa_energy(model: &EnergyModel, p: &[f64], gamma: f64, cfg: EntropyConfig) -> f64 {
    let entropy = if model.kind().is_binary() {
        entropy_binary(p, cfg)
    } else {
        entropy_kary(p, model.arity(), cfg)
    };
    model.relaxed_energy(p) + gamma * entropy
}

/// Gradient of [`qqa_energy`] into `out` (overwrites it).
pub fn qqa_grad(model: &EnergyModel, p: &[f64], gamma: f64, cfg: EntropyConfig, out: &mut [f64]) {
    model.relaxed_grad(p, out);
    if model.kind().is_binary() {
        entropy_binary_grad(p, cfg, gamma, out);
    } else {
        entropy_kary_grad(p, model.arity(), cfg, gamma, out);
    }
}

/// Per-coordinate mean and population standard deviation across the S
/// runs of a flattened ensemble (`data` holds S consecutive blocks of
/// `n_coords` values). Reductions run in a fixed order so results do not
/// depend on thread scheduling.
pub fn column_stats(data: &[f64], s_runs: usize, n_coords: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(data.len(), s_runs * n_coords);
    let mut means = vec![0.0; n_coords];
    let mut stds = vec![0.0; n_coords];
    for i in 0..n_coords {
        let mut sum = 0.0;
        for s in 0..s_runs {
            sum += data[s * n_coords + i];
        }
        let mean = sum / s_runs as f64;
        let mut var = 0.0;
        for s in 0..s_runs {
            let d = data[s * n_coords + i] - mean;
            var += d * d;
        }
        means[i] = mean;
        stds[i] = (var / s_runs as f64).sqrt();
    }
    (means, stds)
}

/// The diversity bonus: `-S * comm_strength * sum_i std_i`, where the
/// standard deviation is taken across runs per coordinate. Zero for a
/// single run or when the coupling is off.
pub fn comm_term(data: &[f64], s_runs: usize, n_coords: usize, cfg: CommConfig) -> f64 {
    if s_runs <= 1 || cfg.comm_strength == 0.0 {
        return 0.0;
    }
    let (_, stds) = column_stats(data, s_runs, n_coords);
    -(s_runs as f64) * cfg.comm_strength * stds.iter().sum::<f64>()
}

/// Ensemble objective: summed annealed energies plus the diversity bonus.
pub fn ensemble_energy(
    model: &EnergyModel,
    data: &[f64],
    s_runs: usize,
    gamma: f64,
    ecfg: EntropyConfig,
    ccfg: CommConfig,
) -> f64 {
    let n_coords = model.n_coords();
    assert_eq!(data.len(), s_runs * n_coords);
    let runs_sum: f64 = data
        .chunks(n_coords)
        .map(|run| qqa_energy(model, run, gamma, ecfg))
        .sum();
    runs_sum + comm_term(data, s_runs, n_coords, ccfg)
}

/// Gradient of [`ensemble_energy`] into `out` (same layout as `data`).
/// The derivative of each coordinate's standard deviation with respect
/// to run s is `(p_s - mean) / (S * max(std, eps))`, so the bonus
/// contributes `-comm_strength * (p_s - mean) / max(std, eps)`.
pub fn ensemble_grad(
    model: &EnergyModel,
    data: &[f64],
    s_runs: usize,
    gamma: f64,
    ecfg: EntropyConfig,
    ccfg: CommConfig,
    out: &mut [f64],
) {
    let n_coords = model.n_coords();
    assert_eq!(data.len(), s_runs * n_coords);
    assert_eq!(out.len(), data.len());
    for (run, grad) in data.chunks(n_coords).zip(out.chunks_mut(n_coords)) {
        qqa_grad(model, run, gamma, ecfg, grad);
    }
    if s_runs > 1 && ccfg.comm_strength != 0.0 {
        let (means, stds) = column_stats(data, s_runs, n_coords);
        for s in 0..s_runs {
            let base = s * n_coords;
            for i in 0..n_coords {
                let dev = data[base + i] - means[i];
                out[base + i] -= ccfg.comm_strength * dev / stds[i].max(ccfg.epsilon_std);
            }
        }
    }
}
