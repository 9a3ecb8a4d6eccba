//! Self-check suites: every mathematical invariant the solver relies on,
//! checked against oracles (finite differences, exhaustive enumeration,
//! exact distributions) at runtime. The CLI exposes these as
//! `verify`, and the `Corruption` hook injects a deliberate bug so the
//! checks themselves can be tested.

use crate::baseline::{boltzmann_enumerate, enumerate_energies, sa_solve, SAConfig};
use crate::gen::gen_er;
use crate::problems::{EnergyModel, ProblemKind};
use crate::relax::{
    column_stats, ensemble_energy, ensemble_grad, entropy_binary, entropy_binary_grad,
    entropy_kary, entropy_kary_grad, CommConfig, EntropyConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Deliberate defects for negative-testing the checks. `MisGradient`
/// perturbs the first coordinate of every independent-set model gradient
/// evaluated inside the suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    None,
    MisGradient,
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// A single check suite: takes the corruption switch, returns a summary on
/// success or a failure description.
type SuiteFn = fn(Corruption) -> Result<String, String>;

/// Runs every suite and reports per-suite pass/fail with details.
pub fn run_all(corruption: Corruption) -> Vec<SuiteResult> {
    let suites: &[(&'static str, SuiteFn)] = &[
        ("model-gradients-binary", suite_model_gradients_binary),
        ("model-gradients-categorical", suite_model_gradients_categorical),
        ("entropy-gradients", suite_entropy_gradients),
        ("ensemble-gradient", suite_ensemble_gradient),
        ("relaxation-exactness", suite_relaxation_exactness),
        ("binary-reduction", suite_binary_reduction),
        ("entropy-range", suite_entropy_range),
        ("coupling-maximizer", suite_coupling_maximizer),
        ("distribution-limits", suite_distribution_limits),
        ("incremental-energy-audit", suite_incremental_audit),
    ];
    suites
        .iter()
        .map(|&(name, f)| {
            let started = Instant::now();
            let outcome = f(corruption);
            let seconds = started.elapsed().as_secs_f64();
            match outcome {
                Ok(detail) => SuiteResult { name, passed: true, detail, seconds },
                Err(detail) => SuiteResult { name, passed: false, detail, seconds },
            }
        })
        .collect()
}

/// Model gradient, with the corruption hook applied where requested.
fn model_grad(model: &EnergyModel, p: &[f64], out: &mut [f64], corruption: Corruption) {
    model.relaxed_grad(p, out);
    if corruption == Corruption::MisGradient && model.kind() == ProblemKind::Mis {
        out[0] += 1e-3;
    }
}

const FD_H: f64 = 1e-5;
const FD_TOL: f64 = 1e-5;

/// Central finite difference of `f` along coordinate `i`.
fn central_diff(f: impl Fn(&[f64]) -> f64, p: &[f64], i: usize) -> f64 {
    let mut hi = p.to_vec();
    let mut lo = p.to_vec();
    hi[i] += FD_H;
    lo[i] -= FD_H;
    (f(&hi) - f(&lo)) / (2.0 * FD_H)
}

/// Compares an analytic gradient against central differences at one
/// point; returns the worst relative error or a description of the first
/// failure.
fn check_grad(
    label: &str,
    f: impl Fn(&[f64]) -> f64,
    analytic: &[f64],
    p: &[f64],
) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (i, &a) in analytic.iter().enumerate() {
        let fd = central_diff(&f, p, i);
        let err = (a - fd).abs() / fd.abs().max(1.0);
        if err > FD_TOL {
            return Err(format!(
                "{label}: coordinate {i}: analytic {a:.9} vs finite-difference {fd:.9} \
                 (relative error {err:.2e})"
            ));
        }
        worst = worst.max(err);
    }
    Ok(worst)
}

fn binary_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| 0.1 + 0.8 * rng.random::<f64>()).collect()
}

fn simplex_point(rng: &mut ChaCha8Rng, n_vars: usize, k: usize) -> Vec<f64> {
    let mut p = vec![0.0; n_vars * k];
    for row in p.chunks_mut(k) {
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = 0.1 + 0.9 * rng.random::<f64>();
            sum += *v;
        }
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    p
}

fn suite_model_gradients_binary(corruption: Corruption) -> Result<String, String> {
    let graph = gen_er(10, 0.3, 1).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut points = 0usize;
    for kind in [ProblemKind::Mis, ProblemKind::MaxClique, ProblemKind::MaxCut] {
        let model = EnergyModel::new(kind, graph.clone()).map_err(|e| e.to_string())?;
        let mut grad = vec![0.0; model.n_coords()];
        for _ in 0..50 {
            let p = binary_point(&mut rng, model.n_coords());
            model_grad(&model, &p, &mut grad, corruption);
            let err = check_grad(
                kind.name(),
                |q| model.relaxed_energy(q),
                &grad,
                &p,
            )?;
            worst = worst.max(err);
            points += 1;
        }
    }
    Ok(format!("checked {points} interior points, worst relative error {worst:.2e}"))
}

fn suite_model_gradients_categorical(corruption: Corruption) -> Result<String, String> {
    let graph = gen_er(8, 0.3, 2).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = 0.0f64;
    let mut points = 0usize;
    for kind in [ProblemKind::Partition { parts: 3 }, ProblemKind::Coloring { colors: 4 }] {
        let model = EnergyModel::new(kind, graph.clone()).map_err(|e| e.to_string())?;
        let mut grad = vec![0.0; model.n_coords()];
        for _ in 0..50 {
            let p = simplex_point(&mut rng, model.n_vars(), model.arity());
            model_grad(&model, &p, &mut grad, corruption);
            let err = check_grad(
                kind.name(),
                |q| model.relaxed_energy(q),
                &grad,
                &p,
            )?;
            worst = worst.max(err);
            points += 1;
        }
    }
    Ok(format!("checked {points} interior points, worst relative error {worst:.2e}"))
}

fn suite_entropy_gradients(_: Corruption) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for alpha in [2u32, 4, 6] {
        let cfg = EntropyConfig::new(alpha).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let p = binary_point(&mut rng, 6);
            let mut grad = vec![0.0; 6];
            entropy_binary_grad(&p, cfg, 1.0, &mut grad);
            let err = check_grad(
                &format!("binary entropy (alpha = {alpha})"),
                |q| entropy_binary(q, cfg),
                &grad,
                &p,
            )?;
            worst = worst.max(err);
        }
    }
    for k in [3usize, 5] {
        let cfg = EntropyConfig::default();
        for _ in 0..20 {
            let p = simplex_point(&mut rng, 4, k);
            let mut grad = vec![0.0; p.len()];
            entropy_kary_grad(&p, k, cfg, 1.0, &mut grad);
            let err = check_grad(
                &format!("categorical entropy (K = {k})"),
                |q| entropy_kary(q, k, cfg),
                &grad,
                &p,
            )?;
            worst = worst.max(err);
        }
    }
    Ok(format!("binary alpha in {{2, 4, 6}} and K in {{3, 5}}, worst relative error {worst:.2e}"))
}

fn suite_ensemble_gradient(_: Corruption) -> Result<String, String> {
    let graph = gen_er(5, 0.5, 3).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let ecfg = EntropyConfig::default();
    let ccfg = CommConfig::new(0.3).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for kind in [ProblemKind::Mis, ProblemKind::Coloring { colors: 3 }] {
        let model = EnergyModel::new(kind, graph.clone()).map_err(|e| e.to_string())?;
        let n_coords = model.n_coords();
        let s_runs = 3usize;
        for _ in 0..10 {
            // Rejection-sample ensembles whose column spreads are well
            // away from zero, where the coupling term is smooth.
            let data = loop {
                let mut d = Vec::with_capacity(s_runs * n_coords);
                for _ in 0..s_runs {
                    if model.kind().is_binary() {
                        d.extend(binary_point(&mut rng, n_coords));
                    } else {
                        d.extend(simplex_point(&mut rng, model.n_vars(), model.arity()));
                    }
                }
                let (_, stds) = column_stats(&d, s_runs, n_coords);
                if stds.iter().all(|&s| s > 0.03) {
                    break d;
                }
            };
            let mut grad = vec![0.0; data.len()];
            ensemble_grad(&model, &data, s_runs, -0.7, ecfg, ccfg, &mut grad);
            let err = check_grad(
                &format!("ensemble objective ({})", kind.name()),
                |q| ensemble_energy(&model, q, s_runs, -0.7, ecfg, ccfg),
                &grad,
                &data,
            )?;
            worst = worst.max(err);
        }
    }
    Ok(format!("3-run ensembles with coupling 0.3, worst relative error {worst:.2e}"))
}

fn suite_relaxation_exactness(_: Corruption) -> Result<String, String> {
    let graph = gen_er(8, 0.4, 4).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let kinds = [
        ProblemKind::Mis,
        ProblemKind::MaxClique,
        ProblemKind::MaxCut,
        ProblemKind::Partition { parts: 3 },
        ProblemKind::Coloring { colors: 4 },
    ];
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for kind in kinds {
        let model = EnergyModel::new(kind, graph.clone()).map_err(|e| e.to_string())?;
        let arity = model.arity() as u8;
        for _ in 0..100 {
            let x: Vec<u8> = (0..model.n_vars()).map(|_| rng.random_range(0..arity)).collect();
            let discrete = model.discrete_energy(&x).map_err(|e| e.to_string())?;
            let p = one_hot(&x, model.arity(), model.n_coords());
            let relaxed = model.relaxed_energy(&p);
            let err = (discrete - relaxed).abs();
            if err > 1e-9 {
                return Err(format!(
                    "{}: integral point {x:?}: discrete energy {discrete} vs relaxed {relaxed}",
                    kind.name()
                ));
            }
            worst = worst.max(err);
            checked += 1;
        }
    }
    Ok(format!("{checked} integral points across 5 problems, worst gap {worst:.2e}"))
}

fn one_hot(x: &[u8], arity: usize, n_coords: usize) -> Vec<f64> {
    if arity == 2 {
        x.iter().map(|&b| b as f64).collect()
    } else {
        let mut p = vec![0.0; n_coords];
        for (i, &b) in x.iter().enumerate() {
            p[i * arity + b as usize] = 1.0;
        }
        p
    }
}

fn suite_binary_reduction(_: Corruption) -> Result<String, String> {
    let cfg = EntropyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p: Vec<f64> = (0..5).map(|_| rng.random::<f64>()).collect();
        let rows: Vec<f64> = p.iter().flat_map(|&v| [1.0 - v, v]).collect();
        let gap = (entropy_kary(&rows, 2, cfg) - entropy_binary(&p, cfg)).abs();
        if gap > 1e-12 {
            return Err(format!(
                "two-category entropy differs from the binary form by {gap:.2e} at {p:?}"
            ));
        }
        worst = worst.max(gap);
    }
    Ok(format!("100 random states, worst gap {worst:.2e}"))
}

fn suite_entropy_range(_: Corruption) -> Result<String, String> {
    let cfg = EntropyConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let n = 6usize;
    for _ in 0..200 {
        let p = binary_point(&mut rng, n);
        let s = entropy_binary(&p, cfg);
        if !(0.0..=n as f64 + 1e-12).contains(&s) {
            return Err(format!("binary entropy {s} outside [0, {n}] at {p:?}"));
        }
    }
    for k in [3usize, 4] {
        for _ in 0..200 {
            let p = simplex_point(&mut rng, n, k);
            let s = entropy_kary(&p, k, cfg);
            if !(0.0..=n as f64 + 1e-12).contains(&s) {
                return Err(format!("categorical entropy {s} outside [0, {n}] (K = {k})"));
            }
        }
        // Exactness at the extreme points.
        let hot = vec![1.0 / k as f64; n * k];
        if (entropy_kary(&hot, k, cfg) - n as f64).abs() > 1e-12 {
            return Err(format!("uniform rows should score exactly {n} (K = {k})"));
        }
        let mut cold = vec![0.0; n * k];
        for row in 0..n {
            cold[row * k] = 1.0;
        }
        if entropy_kary(&cold, k, cfg).abs() > 1e-12 {
            return Err(format!("one-hot rows should score exactly 0 (K = {k})"));
        }
    }
    Ok("per-node entropy stays in [0, 1] with exact endpoints".into())
}

fn suite_coupling_maximizer(_: Corruption) -> Result<String, String> {
    // Exhaustive check that the summed column spread over binary
    // ensembles is maximized exactly at half-split columns.
    let (s_runs, n_coords) = (4usize, 2usize);
    let mut best = f64::NEG_INFINITY;
    let mut argmax = Vec::new();
    for bits in 0..(1u32 << (s_runs * n_coords)) {
        let data: Vec<f64> =
            (0..s_runs * n_coords).map(|i| ((bits >> i) & 1) as f64).collect();
        let (_, stds) = column_stats(&data, s_runs, n_coords);
        let total: f64 = stds.iter().sum();
        if total > best + 1e-12 {
            best = total;
            argmax.clear();
        }
        if (total - best).abs() <= 1e-12 {
            argmax.push(bits);
        }
    }
    // Half-split columns have variance 1/4, so the two-column maximum is
    // 2 * 1/2 = 1.
    if (best - 1.0).abs() > 1e-12 {
        return Err(format!("4-run maximum column spread should be 1, got {best}"));
    }
    for bits in &argmax {
        for col in 0..n_coords {
            let ones: u32 = (0..s_runs)
                .map(|s| (bits >> (s * n_coords + col)) & 1)
                .sum();
            if ones != 2 {
                return Err(format!(
                    "maximizer {bits:#06b} has a column with {ones} ones out of 4; \
                     only half splits should attain the maximum"
                ));
            }
        }
    }
    // Odd run counts: the best split of 5 is 2/3, variance 6/25.
    let mut best5 = f64::NEG_INFINITY;
    for bits in 0..(1u32 << 5) {
        let data: Vec<f64> = (0..5).map(|i| ((bits >> i) & 1) as f64).collect();
        let (_, stds) = column_stats(&data, 5, 1);
        best5 = best5.max(stds[0]);
    }
    let expected5 = (24.0f64 / 100.0).sqrt();
    if (best5 - expected5).abs() > 1e-12 {
        return Err(format!(
            "5-run maximum column spread should be sqrt(0.24), got {best5}"
        ));
    }
    Ok(format!(
        "exhaustive over 4-run pairs and 5-run singles: maxima 1 and {expected5:.6} at half splits"
    ))
}

fn suite_distribution_limits(_: Corruption) -> Result<String, String> {
    let graphs = [
        gen_er(8, 0.3, 6).map_err(|e| e.to_string())?,
        gen_er(10, 0.4, 7).map_err(|e| e.to_string())?,
    ];
    for graph in graphs {
        let model = EnergyModel::new(ProblemKind::Mis, graph).map_err(|e| e.to_string())?;
        let hot = boltzmann_enumerate(&model, 1e6).map_err(|e| e.to_string())?;
        let spread = hot.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - hot.iter().cloned().fold(f64::INFINITY, f64::min);
        if spread > 1e-4 {
            return Err(format!(
                "high-temperature distribution should be uniform, spread {spread:.2e}"
            ));
        }
        let energies = enumerate_energies(&model, 1 << 20).map_err(|e| e.to_string())?;
        let min_e = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let cold = boltzmann_enumerate(&model, 1e-3).map_err(|e| e.to_string())?;
        let mass_on_optima: f64 = cold
            .iter()
            .zip(&energies)
            .filter(|&(_, &e)| (e - min_e).abs() < 1e-9)
            .map(|(&p, _)| p)
            .sum();
        if mass_on_optima < 0.999 {
            return Err(format!(
                "low-temperature distribution should concentrate on minimizers, \
                 got mass {mass_on_optima:.6}"
            ));
        }
    }
    Ok("hot limit uniform within 1e-4, cold limit mass on minimizers >= 0.999".into())
}

fn suite_incremental_audit(_: Corruption) -> Result<String, String> {
    let graph = gen_er(25, 0.25, 8).map_err(|e| e.to_string())?;
    let kinds = [
        ProblemKind::Mis,
        ProblemKind::MaxClique,
        ProblemKind::MaxCut,
        ProblemKind::Partition { parts: 3 },
        ProblemKind::Coloring { colors: 4 },
    ];
    for kind in kinds {
        let model = EnergyModel::new(kind, graph.clone()).map_err(|e| e.to_string())?;
        let mut cfg = SAConfig::new(3000);
        cfg.seed = 13;
        cfg.audit = true;
        sa_solve(&model, &cfg).map_err(|e| format!("{}: {e}", kind.name()))?;
    }
    Ok("3000 audited moves per problem, incremental energies exact".into())
}
