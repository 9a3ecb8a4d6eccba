//! End-to-end acceptance checks: oracle optimality on small graphs,
//! benchmark coloring targets, convergence of the entropy term,
//! distribution limits, exhaustive diversity-term properties, gradient
//! correctness, speed and quality comparisons against the local-move
//! baseline, ablation directions, and byte-level reproducibility.
//!
//! Each test prints one `criterion NN: PASS/FAIL` line with details.

use pqqa::annealer::{self, AnnealSchedule};
use pqqa::baseline::{self, SAConfig};
use pqqa::gen;
use pqqa::graph::Graph;
use pqqa::problems::{EnergyModel, ProblemKind};
use pqqa::relax::{CommConfig, EntropyConfig};
use pqqa::report::steps_to_fraction;
use pqqa::verify::{self, Corruption, SuiteResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Instant;

// Quality floors and tolerances asserted below.
const MATCH_RATE_FLOOR: f64 = 0.90;
const MEAN_APR_FLOOR: f64 = 0.98;
const SMALL_ORACLE_BUDGET_S: f64 = 120.0;
const COLORING_BUDGET_PER_INSTANCE_S: f64 = 30.0;
const TERMINAL_ENTROPY_CAP: f64 = 0.01;
const COLD_MASS_FLOOR: f64 = 0.999;
const COLD_UNIFORMITY_TOL: f64 = 1e-6;
const HOT_UNIFORMITY_TOL: f64 = 1e-4;
const WEIGHTED_CUT_BUDGET_PER_INSTANCE_S: f64 = 10.0;

fn pass_line(number: u32, ok: bool, detail: &str) {
    println!("criterion {number:02}: {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {number:02} failed: {detail}");
}

// ---------------------------------------------------------------------------
// Shared workload: 50 small random instances per binary problem, solved by
// the annealer at stock settings and checked against exhaustive search.
// ---------------------------------------------------------------------------

struct SmallOracleOutcome {
    /// (problem name, matches, feasible count, mean approximation ratio)
    per_problem: Vec<(&'static str, usize, usize, f64)>,
    /// Largest terminal mean per-node entropy over all 150 solves.
    max_entropy: f64,
    wall_s: f64,
}

fn small_oracle_outcome() -> &'static SmallOracleOutcome {
    static CELL: OnceLock<SmallOracleOutcome> = OnceLock::new();
    CELL.get_or_init(|| {
        let started = Instant::now();
        let schedule = AnnealSchedule::new(3000);
        let entropy = EntropyConfig::default();
        let comm = CommConfig::new(0.2).expect("comm strength in range");
        let mut per_problem = Vec::new();
        let mut max_entropy = 0.0f64;
        for (name, kind) in [
            ("mis", ProblemKind::Mis),
            ("clique", ProblemKind::MaxClique),
            ("maxcut", ProblemKind::MaxCut),
        ] {
            let mut matches = 0usize;
            let mut feasible = 0usize;
            let mut apr_sum = 0.0f64;
            for instance_seed in 0..50u64 {
                let graph = gen::gen_er(12, 0.3, instance_seed).expect("valid generator input");
                let model = EnergyModel::new(kind, graph).expect("valid model");
                let oracle = baseline::brute_force(&model).expect("enumerable size");
                let report =
                    annealer::run(&model, 100, &schedule, entropy, comm, 0).expect("solver runs");
                max_entropy = max_entropy.max(report.final_mean_entropy);
                if report.best.feasible {
                    feasible += 1;
                }
                if report.best.objective == oracle.objective {
                    matches += 1;
                }
                let opt_raw = model.raw_objective(&oracle.assignment);
                apr_sum += if opt_raw != 0.0 { report.best_raw / opt_raw } else { 1.0 };
            }
            per_problem.push((name, matches, feasible, apr_sum / 50.0));
        }
        SmallOracleOutcome { per_problem, max_entropy, wall_s: started.elapsed().as_secs_f64() }
    })
}

// ---------------------------------------------------------------------------
// Shared workload: three benchmark coloring instances, five seeds each, with
// per-instance settings (all learning rates from the {1, 0.1, 0.01} grid).
// ---------------------------------------------------------------------------

struct ColoringInstanceOutcome {
    name: &'static str,
    conflicts: Vec<f64>,
    max_entropy: f64,
    wall_s: f64,
}

fn coloring_outcome() -> &'static Vec<ColoringInstanceOutcome> {
    static CELL: OnceLock<Vec<ColoringInstanceOutcome>> = OnceLock::new();
    CELL.get_or_init(|| {
        struct Setup {
            name: &'static str,
            graph: Graph,
            colors: usize,
            s_runs: usize,
            steps: usize,
            learning_rate: f64,
            gamma_min: f64,
            gamma_max: f64,
            temperature: f64,
            alpha: u32,
        }
        let setups = [
            Setup {
                name: "queen5-5 (5 colors)",
                graph: gen::gen_queen(5),
                colors: 5,
                s_runs: 100,
                steps: 3000,
                learning_rate: 0.01,
                gamma_min: -0.5,
                gamma_max: 0.1,
                temperature: 1e-3,
                alpha: 4,
            },
            Setup {
                name: "queen6-6 (7 colors)",
                graph: gen::gen_queen(6),
                colors: 7,
                s_runs: 300,
                steps: 3000,
                learning_rate: 0.1,
                gamma_min: -0.3,
                gamma_max: 0.5,
                temperature: 0.01,
                alpha: 2,
            },
            Setup {
                name: "myciel5 (6 colors)",
                graph: gen::gen_mycielski(5).expect("valid index"),
                colors: 6,
                s_runs: 100,
                steps: 3000,
                learning_rate: 0.1,
                gamma_min: -0.5,
                gamma_max: 0.5,
                temperature: 0.005,
                alpha: 2,
            },
        ];
        setups
            .into_iter()
            .map(|setup| {
                let started = Instant::now();
                let model =
                    EnergyModel::new(ProblemKind::Coloring { colors: setup.colors }, setup.graph)
                        .expect("valid model");
                let mut schedule = AnnealSchedule::new(setup.steps);
                schedule.learning_rate = setup.learning_rate;
                schedule.gamma_min = setup.gamma_min;
                schedule.gamma_max = setup.gamma_max;
                schedule.temperature = setup.temperature;
                let entropy = EntropyConfig::new(setup.alpha).expect("valid exponent");
                let comm = CommConfig::default();
                let mut conflicts = Vec::new();
                let mut max_entropy = 0.0f64;
                for seed in 0..5u64 {
                    let report = annealer::run(&model, setup.s_runs, &schedule, entropy, comm, seed)
                        .expect("solver runs");
                    conflicts.push(report.best.objective);
                    max_entropy = max_entropy.max(report.final_mean_entropy);
                }
                ColoringInstanceOutcome {
                    name: setup.name,
                    conflicts,
                    max_entropy,
                    wall_s: started.elapsed().as_secs_f64(),
                }
            })
            .collect()
    })
}

fn verify_results() -> &'static Vec<SuiteResult> {
    static CELL: OnceLock<Vec<SuiteResult>> = OnceLock::new();
    CELL.get_or_init(|| verify::run_all(Corruption::None))
}

fn suite(name: &str) -> &'static SuiteResult {
    verify_results().iter().find(|s| s.name == name).expect("suite exists")
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_01_small_graph_oracle_optimality() {
    let out = small_oracle_outcome();
    let mut ok = out.wall_s <= SMALL_ORACLE_BUDGET_S;
    let mut parts = Vec::new();
    for &(name, matches, feasible, mean_apr) in &out.per_problem {
        ok &= feasible == 50;
        ok &= (matches as f64) / 50.0 >= MATCH_RATE_FLOOR;
        ok &= mean_apr >= MEAN_APR_FLOOR;
        parts.push(format!("{name} {matches}/50 optimal, {feasible}/50 feasible, ApR {mean_apr:.4}"));
    }
    pass_line(1, ok, &format!("{}; {:.1}s total", parts.join("; "), out.wall_s));
}

#[test]
fn criterion_02_benchmark_coloring_reaches_zero_conflicts() {
    let outcomes = coloring_outcome();
    let mut ok = true;
    let mut parts = Vec::new();
    for out in outcomes {
        let zero = out.conflicts.contains(&0.0);
        ok &= zero;
        ok &= out.wall_s <= COLORING_BUDGET_PER_INSTANCE_S;
        let listed: Vec<String> = out.conflicts.iter().map(|c| format!("{c:.0}")).collect();
        parts.push(format!("{} conflicts [{}] in {:.1}s", out.name, listed.join(","), out.wall_s));
    }
    pass_line(2, ok, &parts.join("; "));
}

#[test]
fn criterion_03_terminal_entropy_approaches_zero() {
    let oracle = small_oracle_outcome();
    let coloring = coloring_outcome();
    let coloring_max =
        coloring.iter().map(|o| o.max_entropy).fold(0.0f64, f64::max);
    let worst = oracle.max_entropy.max(coloring_max);
    let ok = worst <= TERMINAL_ENTROPY_CAP;
    pass_line(
        3,
        ok,
        &format!(
            "worst terminal mean per-node entropy {worst:.2e} (cap {TERMINAL_ENTROPY_CAP}) \
             across {} solves",
            3 * 50 + coloring.len() * 5
        ),
    );
}

#[test]
fn criterion_04_distribution_limits_on_small_instances() {
    let mut ok = true;
    let mut worst_mass = 1.0f64;
    let mut worst_gap = 0.0f64;
    let mut worst_hot = 0.0f64;
    for i in 0..10u64 {
        let n = 6 + (i as usize % 5);
        let graph = gen::gen_er(n, 0.3, 100 + i).expect("valid generator input");
        let model = EnergyModel::new(ProblemKind::Mis, graph).expect("valid model");
        let energies = baseline::enumerate_energies(&model, 1 << 20).expect("enumerable");
        let min_energy = energies.iter().cloned().fold(f64::INFINITY, f64::min);
        let optimal: Vec<usize> = energies
            .iter()
            .enumerate()
            .filter(|(_, &e)| (e - min_energy).abs() <= 1e-12)
            .map(|(idx, _)| idx)
            .collect();

        let cold = baseline::boltzmann_enumerate(&model, 1e-3).expect("enumerable");
        let mass: f64 = optimal.iter().map(|&idx| cold[idx]).sum();
        worst_mass = worst_mass.min(mass);
        ok &= mass >= COLD_MASS_FLOOR;
        let share = mass / optimal.len() as f64;
        for &idx in &optimal {
            let gap = (cold[idx] - share).abs();
            worst_gap = worst_gap.max(gap);
            ok &= gap <= COLD_UNIFORMITY_TOL;
        }

        let hot = baseline::boltzmann_enumerate(&model, 1e6).expect("enumerable");
        let uniform = 1.0 / hot.len() as f64;
        for &p in &hot {
            let gap = (p - uniform).abs();
            worst_hot = worst_hot.max(gap);
            ok &= gap <= HOT_UNIFORMITY_TOL;
        }
    }
    pass_line(
        4,
        ok,
        &format!(
            "10 instances: cold optimal mass ≥ {worst_mass:.6}, worst split gap {worst_gap:.1e}, \
             worst hot deviation {worst_hot:.1e}"
        ),
    );
}

#[test]
fn criterion_05_diversity_term_maximizer_exhaustive() {
    let result = suite("coupling-maximizer");
    pass_line(5, result.passed, &result.detail);
}

#[test]
fn criterion_06_gradients_match_finite_differences() {
    let names =
        ["model-gradients-binary", "model-gradients-categorical", "entropy-gradients", "ensemble-gradient"];
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        let result = suite(name);
        ok &= result.passed;
        parts.push(format!("{}: {}", result.name, result.detail));
    }
    pass_line(6, ok, &parts.join("; "));
}

#[test]
fn criterion_07_two_category_rows_reduce_to_binary_form() {
    let result = suite("binary-reduction");
    pass_line(7, result.passed, &result.detail);
}

#[test]
fn criterion_08_single_run_matches_long_baseline_with_fewer_steps() {
    let graph = gen::gen_er(300, 0.05, 0).expect("valid generator input");
    let model = EnergyModel::new(ProblemKind::Mis, graph).expect("valid model");

    let sa_steps = 1_000_000usize;
    let qqa_steps = 10_000usize;
    let mut sa_sizes = Vec::new();
    let mut qqa_sizes = Vec::new();
    let mut all_feasible = true;
    for seed in 0..5u64 {
        let mut sa_cfg = SAConfig::new(sa_steps);
        sa_cfg.seed = seed;
        let sa = baseline::sa_solve(&model, &sa_cfg).expect("baseline runs");
        all_feasible &= sa.feasible;
        sa_sizes.push(model.raw_objective(&sa.assignment));

        let mut schedule = AnnealSchedule::new(qqa_steps);
        schedule.learning_rate = 1.0;
        let report = annealer::run(
            &model,
            1,
            &schedule,
            EntropyConfig::default(),
            CommConfig::default(),
            seed,
        )
        .expect("solver runs");
        all_feasible &= report.best.feasible;
        qqa_sizes.push(report.best_raw);
    }
    let sa_mean: f64 = sa_sizes.iter().sum::<f64>() / 5.0;
    let qqa_mean: f64 = qqa_sizes.iter().sum::<f64>() / 5.0;
    let ok = all_feasible && qqa_mean >= sa_mean && sa_steps >= 100 * qqa_steps;
    pass_line(
        8,
        ok,
        &format!(
            "single-run mean set size {qqa_mean:.1} at {qqa_steps} steps vs baseline {sa_mean:.1} \
             at {sa_steps} steps ({}x step reduction)",
            sa_steps / qqa_steps
        ),
    );
}

#[test]
fn criterion_09_negative_start_beats_skipped_annealing_phase() {
    let graph = gen::gen_er(300, 0.05, 0).expect("valid generator input");
    let model = EnergyModel::new(ProblemKind::Mis, graph).expect("valid model");
    let entropy = EntropyConfig::default();
    let comm = CommConfig::new(0.2).expect("comm strength in range");

    let mean_size = |gamma_min: f64| -> f64 {
        let mut schedule = AnnealSchedule::new(3000);
        schedule.gamma_min = gamma_min;
        let mut total = 0.0;
        for seed in 0..5u64 {
            let report =
                annealer::run(&model, 100, &schedule, entropy, comm, seed).expect("solver runs");
            total += report.best_raw;
        }
        total / 5.0
    };

    let annealed = mean_size(-2.0);
    let skipped = mean_size(0.1);
    let ok = annealed > skipped;
    pass_line(
        9,
        ok,
        &format!("mean set size {annealed:.1} with full ramp vs {skipped:.1} with constant penalty"),
    );
}

#[test]
fn criterion_10_communication_speeds_convergence() {
    let graph = gen::gen_er(300, 0.05, 0).expect("valid generator input");
    let model = EnergyModel::new(ProblemKind::Mis, graph).expect("valid model");
    let entropy = EntropyConfig::default();
    let schedule = AnnealSchedule::new(3000);

    let mean_steps_to_99 = |strength: f64| -> f64 {
        let comm = CommConfig::new(strength).expect("comm strength in range");
        let mut total = 0.0;
        for seed in 0..5u64 {
            let report =
                annealer::run(&model, 100, &schedule, entropy, comm, seed).expect("solver runs");
            let steps = steps_to_fraction(&report.trace, 0.01).expect("non-empty trace");
            total += steps as f64;
        }
        total / 5.0
    };

    let baseline_steps = mean_steps_to_99(0.0);
    let mut best: Option<(f64, f64)> = None;
    for strength in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let steps = mean_steps_to_99(strength);
        if best.is_none_or(|(_, s)| steps < s) {
            best = Some((strength, steps));
        }
    }
    let (best_strength, best_steps) = best.expect("non-empty grid");
    let ok = best_steps <= baseline_steps;
    pass_line(
        10,
        ok,
        &format!(
            "mean steps to 99% of final best: {best_steps:.0} at strength {best_strength} vs \
             {baseline_steps:.0} without communication"
        ),
    );
}

#[test]
fn criterion_11_weighted_cut_matches_long_baseline_on_every_instance() {
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    let mut max_wall = 0.0f64;
    for g in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + g);
        let n = 125usize;
        let mut pairs = BTreeSet::new();
        while pairs.len() < 375 {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                pairs.insert((u.min(v), u.max(v)));
            }
        }
        let edges: Vec<(usize, usize, f64)> = pairs
            .into_iter()
            .map(|(u, v)| (u, v, f64::from(rng.random_range(-1i32..=1))))
            .collect();
        let graph = Graph::new(n, &edges).expect("valid graph");
        let model = EnergyModel::new(ProblemKind::MaxCut, graph).expect("valid model");

        let started = Instant::now();
        let mut schedule = AnnealSchedule::new(1000);
        schedule.learning_rate = 1.0;
        schedule.gamma_min = -5.0;
        let report = annealer::run(
            &model,
            1000,
            &schedule,
            EntropyConfig::default(),
            CommConfig::new(0.2).expect("comm strength in range"),
            0,
        )
        .expect("solver runs");
        let wall = started.elapsed().as_secs_f64();
        max_wall = max_wall.max(wall);

        let mut sa_cfg = SAConfig::new(100 * 1000);
        sa_cfg.seed = 0;
        let sa = baseline::sa_solve(&model, &sa_cfg).expect("baseline runs");
        let sa_raw = model.raw_objective(&sa.assignment);

        worst_margin = worst_margin.min(report.best_raw - sa_raw);
        ok &= report.best_raw >= sa_raw;
        ok &= wall <= WEIGHTED_CUT_BUDGET_PER_INSTANCE_S;
    }
    pass_line(
        11,
        ok,
        &format!(
            "10 weighted 125-node instances: worst margin over baseline {worst_margin:+.0}, \
             max wall {max_wall:.1}s"
        ),
    );
}

#[test]
fn criterion_12_reports_are_byte_identical_across_repeats() {
    let bin = env!("CARGO_BIN_EXE_pqqa");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "solve", "--problem", "mis", "--gen", "er:n=60,p=0.1", "--solver", "pqqa", "--runs",
            "25", "--steps", "400", "--seed", "7", "--redact-timing",
        ],
        vec![
            "solve", "--problem", "partition", "--parts", "3", "--gen", "er:n=30,p=0.2",
            "--solver", "pqqa", "--runs", "10", "--steps", "300", "--seed", "3", "--redact-timing",
        ],
    ];
    let mut ok = true;
    let mut sizes = Vec::new();
    for case in &cases {
        let run_once = || {
            let out = std::process::Command::new(bin)
                .args(case)
                .env("RAYON_NUM_THREADS", "2")
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "solver exited with {:?}", out.status);
            out.stdout
        };
        let first = run_once();
        let second = run_once();
        ok &= first == second;
        sizes.push(first.len());
    }
    pass_line(
        12,
        ok,
        &format!("2 configs re-run byte-identically ({} and {} byte reports)", sizes[0], sizes[1]),
    );
}
