//! Command-line interface: solve one instance, sweep one parameter axis,
//! or run the self-check suites.
//!
//! Exit codes: 0 success, 1 self-check failure, 2 configuration error,
//! 3 input/output error, 4 solver abort.

use clap::{Args, Parser, Subcommand, ValueEnum};
use pqqa::annealer::{self, repair_mis, AnnealError, AnnealSchedule, TraceRow};
use pqqa::baseline::{
    brute_force, greedy_mis_seeded, sa_solve, BaselineError, CoolingSchedule, SAConfig,
};
use pqqa::gen::{build_from_spec, InstanceMeta};
use pqqa::graph::{parse_dimacs, parse_weighted_edgelist, Graph};
use pqqa::problems::{
    compute_metrics, select_lambda, DiscreteSolution, EnergyModel, ProblemKind,
};
use pqqa::relax::{CommConfig, EntropyConfig};
use pqqa::report::{
    render_csv, render_json, render_sweep_csv, steps_to_fraction, ConfigEcho, InstanceInfo,
    ResultBlock, SaEcho, ScheduleEcho, SolveReport, SweepRow, REPORT_SCHEMA_VERSION,
};
use pqqa::verify::{run_all, Corruption};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "pqqa",
    version,
    about = "Annealed-relaxation solver for combinatorial optimization on graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and write a JSON or CSV report.
    Solve(Box<SolveArgs>),
    /// Rerun the annealer across a grid of one parameter and write a CSV
    /// table.
    Sweep(Box<SweepArgs>),
    /// Run the built-in mathematical self-checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Mis,
    Clique,
    Maxcut,
    Partition,
    Coloring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    /// Decide from the first non-blank line.
    Auto,
    /// "p edge N M" header with 1-based "e u v" lines.
    Dimacs,
    /// Optional "N M" header with 0-based "u v [w]" lines.
    Edgelist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    /// Annealed-relaxation ensemble solver.
    Pqqa,
    /// Simulated annealing on discrete states.
    Sa,
    /// Greedy minimum-degree independent set.
    Greedy,
    /// Exhaustive enumeration (small instances only).
    Brute,
}

impl SolverArg {
    fn name(self) -> &'static str {
        match self {
            SolverArg::Pqqa => "pqqa",
            SolverArg::Sa => "sa",
            SolverArg::Greedy => "greedy",
            SolverArg::Brute => "brute",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SaScheduleArg {
    Geometric,
    Linear,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    /// Starting entropy coefficient (the annealed endpoint stays fixed).
    Gamma0,
    /// Total update steps.
    Steps,
    /// Cross-run coupling strength.
    #[value(name = "comm_strength")]
    CommStrength,
}

impl AxisArg {
    fn name(self) -> &'static str {
        match self {
            AxisArg::Gamma0 => "gamma0",
            AxisArg::Steps => "steps",
            AxisArg::CommStrength => "comm_strength",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CorruptArg {
    /// Perturb independent-set gradients inside the checks.
    MisGradient,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Read the graph from a file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Generate the graph from a spec such as "er:n=100,p=0.1,seed=3".
    /// Families: er(n,p), ba(n,m), rrg(n,d), queen(n), mycielski(k).
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args)]
struct InstanceArgs {
    /// Problem to solve.
    #[arg(long, value_enum)]
    problem: ProblemArg,
    /// Number of parts (partition only).
    #[arg(long)]
    parts: Option<usize>,
    /// Number of colors (coloring only).
    #[arg(long)]
    colors: Option<usize>,
    #[command(flatten)]
    input: InputArgs,
    /// How to parse --file input.
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    input_format: InputFormat,
}

#[derive(Args)]
struct AnnealArgs {
    /// Parallel runs in the ensemble.
    #[arg(long, default_value_t = 100)]
    runs: usize,
    /// Update steps.
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Entropy coefficient at step 0 (bonus when negative).
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    gamma_min: f64,
    /// Entropy coefficient at the final step.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    gamma_max: f64,
    /// Gradient step size.
    #[arg(long = "lr", default_value_t = 0.1)]
    learning_rate: f64,
    /// Langevin noise temperature.
    #[arg(long, default_value_t = 1e-3)]
    temperature: f64,
    /// Decoupled weight decay.
    #[arg(long, default_value_t = 0.01)]
    weight_decay: f64,
    /// Steps between rounding evaluations (default: every 1% of the
    /// budget).
    #[arg(long)]
    eval_interval: Option<usize>,
    /// Disable the Langevin noise term.
    #[arg(long)]
    no_noise: bool,
    /// Cross-run coupling strength in [0, 1]; 0 decouples the runs.
    #[arg(long, default_value_t = 0.2)]
    comm_strength: f64,
    /// Even exponent of the entropy polynomial.
    #[arg(long, default_value_t = 4)]
    entropy_alpha: u32,
    /// Master seed; fixed seeds give bit-identical results.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl AnnealArgs {
    fn schedule(&self) -> AnnealSchedule {
        let mut s = AnnealSchedule::new(self.steps);
        s.gamma_min = self.gamma_min;
        s.gamma_max = self.gamma_max;
        s.temperature = self.temperature;
        s.learning_rate = self.learning_rate;
        s.weight_decay = self.weight_decay;
        if let Some(interval) = self.eval_interval {
            s.eval_interval = interval;
        }
        s.noise = !self.no_noise;
        s
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Solver to run.
    #[arg(long, value_enum, default_value_t = SolverArg::Pqqa)]
    solver: SolverArg,
    #[command(flatten)]
    anneal: AnnealArgs,
    /// Penalty weight override.
    #[arg(long, conflicts_with = "auto_lambda")]
    lambda: Option<f64>,
    /// Select the penalty weight by exhaustive enumeration (small
    /// instances only; falls back to the default otherwise).
    #[arg(long)]
    auto_lambda: bool,
    /// Best-known raw objective, enabling the approximation ratio.
    #[arg(long, allow_negative_numbers = true)]
    reference: Option<f64>,
    /// Simulated-annealing start temperature.
    #[arg(long, default_value_t = 2.0)]
    sa_t_start: f64,
    /// Simulated-annealing end temperature.
    #[arg(long, default_value_t = 0.01)]
    sa_t_end: f64,
    /// Simulated-annealing cooling curve.
    #[arg(long, value_enum, default_value_t = SaScheduleArg::Geometric)]
    sa_schedule: SaScheduleArg,
    /// Use heat-bath resampling instead of Metropolis flips.
    #[arg(long)]
    sa_gibbs: bool,
    /// Recompute the full energy after every accepted move and abort on
    /// any disagreement with the incremental bookkeeping.
    #[arg(long)]
    sa_audit: bool,
    /// Greedily repair infeasible independent sets before reporting.
    #[arg(long)]
    repair: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report_format: ReportFormat,
    /// Write the wall-time field as 0 so identical runs produce
    /// byte-identical reports.
    #[arg(long)]
    redact_timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[command(flatten)]
    anneal: AnnealArgs,
    /// Penalty weight override.
    #[arg(long)]
    lambda: Option<f64>,
    /// Best-known raw objective, enabling the approximation ratio
    /// column.
    #[arg(long, allow_negative_numbers = true)]
    reference: Option<f64>,
    /// Parameter to vary.
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Comma-separated axis values, e.g. "-5,-2,-0.5,0.1".
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Seeds per axis value (seed, seed+1, ...).
    #[arg(long, default_value_t = 5)]
    sweep_seeds: usize,
    /// Write the CSV table here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Inject a deliberate defect to confirm the checks catch it.
    #[arg(long, value_enum)]
    corrupt: Option<CorruptArg>,
}

/// Error carrying its process exit code.
#[derive(Debug)]
enum CliError {
    Verify(String),
    Config(String),
    Io(String),
    Solver(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Solver(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Verify(m) | CliError::Config(m) | CliError::Io(m) | CliError::Solver(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => run_solve(&args),
        Command::Sweep(args) => run_sweep(&args),
        Command::Verify(args) => run_verify(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn detect_format(text: &str) -> InputFormat {
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let dimacs = t == "c"
            || t.starts_with("c ")
            || t.starts_with("c\t")
            || t.starts_with("p ")
            || t.starts_with("p\t")
            || t.starts_with("e ")
            || t.starts_with("e\t");
        return if dimacs { InputFormat::Dimacs } else { InputFormat::Edgelist };
    }
    InputFormat::Edgelist
}

fn load_graph(args: &InstanceArgs) -> Result<(Graph, String, Option<InstanceMeta>), CliError> {
    if let Some(path) = &args.input.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let format = match args.input_format {
            InputFormat::Auto => detect_format(&text),
            explicit => explicit,
        };
        let graph = match format {
            InputFormat::Dimacs => parse_dimacs(&text),
            InputFormat::Edgelist => parse_weighted_edgelist(&text),
            InputFormat::Auto => unreachable!("auto resolves above"),
        }
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok((graph, format!("file:{}", path.display()), None))
    } else {
        let spec = args.input.gen.as_ref().expect("clap requires one input");
        let (graph, meta) =
            build_from_spec(spec).map_err(|e| CliError::Config(e.to_string()))?;
        Ok((graph, format!("gen:{spec}"), Some(meta)))
    }
}

fn build_kind(args: &InstanceArgs) -> Result<ProblemKind, CliError> {
    if args.parts.is_some() && args.problem != ProblemArg::Partition {
        return Err(CliError::Config("--parts only applies to --problem partition".into()));
    }
    if args.colors.is_some() && args.problem != ProblemArg::Coloring {
        return Err(CliError::Config("--colors only applies to --problem coloring".into()));
    }
    Ok(match args.problem {
        ProblemArg::Mis => ProblemKind::Mis,
        ProblemArg::Clique => ProblemKind::MaxClique,
        ProblemArg::Maxcut => ProblemKind::MaxCut,
        ProblemArg::Partition => ProblemKind::Partition {
            parts: args
                .parts
                .ok_or_else(|| CliError::Config("--problem partition requires --parts".into()))?,
        },
        ProblemArg::Coloring => ProblemKind::Coloring {
            colors: args
                .colors
                .ok_or_else(|| CliError::Config("--problem coloring requires --colors".into()))?,
        },
    })
}

fn build_model(
    instance: &InstanceArgs,
    lambda: Option<f64>,
    auto_lambda: bool,
) -> Result<(EnergyModel, String, Option<InstanceMeta>), CliError> {
    let (graph, source, meta) = load_graph(instance)?;
    let kind = build_kind(instance)?;
    let mut model =
        EnergyModel::new(kind, graph).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(l) = lambda {
        model.set_lambda(l).map_err(|e| CliError::Config(e.to_string()))?;
    } else if auto_lambda {
        let l = select_lambda(&model);
        model.set_lambda(l).map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok((model, source, meta))
}

fn check_reference(reference: Option<f64>) -> Result<(), CliError> {
    if let Some(r) = reference {
        if !r.is_finite() || r == 0.0 {
            return Err(CliError::Config(format!(
                "--reference must be finite and nonzero, got {r}"
            )));
        }
    }
    Ok(())
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        // The content is fully rendered before this point, so a failed
        // run never leaves a partial file behind.
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Everything the report needs from whichever solver ran.
struct SolveOutcome {
    best: DiscreteSolution,
    per_run: Vec<f64>,
    n_feasible_runs: usize,
    trace: Vec<TraceRow>,
    final_mean_entropy: Option<f64>,
    wall_time_s: f64,
    schedule: Option<ScheduleEcho>,
    sa: Option<SaEcho>,
}

fn map_anneal_error(e: AnnealError) -> CliError {
    match e {
        AnnealError::InvalidConfig(_) => CliError::Config(e.to_string()),
        _ => CliError::Solver(e.to_string()),
    }
}

fn map_baseline_error(e: BaselineError) -> CliError {
    match e {
        BaselineError::AuditMismatch { .. } => CliError::Solver(e.to_string()),
        _ => CliError::Config(e.to_string()),
    }
}

fn solve_with(args: &SolveArgs, model: &EnergyModel) -> Result<SolveOutcome, CliError> {
    let anneal = &args.anneal;
    match args.solver {
        SolverArg::Pqqa => {
            let schedule = anneal.schedule();
            let entropy = EntropyConfig::new(anneal.entropy_alpha)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let comm = CommConfig::new(anneal.comm_strength)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let report = annealer::run(model, anneal.runs, &schedule, entropy, comm, anneal.seed)
                .map_err(map_anneal_error)?;
            let mut best = report.best;
            if args.repair {
                best = repair_mis(model, &best).map_err(map_anneal_error)?;
            }
            Ok(SolveOutcome {
                best,
                per_run: report.per_run.iter().map(|s| s.objective).collect(),
                n_feasible_runs: report.per_run.iter().filter(|s| s.feasible).count(),
                trace: report.trace,
                final_mean_entropy: Some(report.final_mean_entropy),
                wall_time_s: report.wall_time_s,
                schedule: Some((&schedule).into()),
                sa: None,
            })
        }
        SolverArg::Sa => {
            let started = Instant::now();
            let mut cfg = SAConfig::new(anneal.steps);
            cfg.t_start = args.sa_t_start;
            cfg.t_end = args.sa_t_end;
            cfg.schedule = match args.sa_schedule {
                SaScheduleArg::Geometric => CoolingSchedule::Geometric,
                SaScheduleArg::Linear => CoolingSchedule::Linear,
            };
            cfg.gibbs = args.sa_gibbs;
            cfg.audit = args.sa_audit;
            let mut best: Option<DiscreteSolution> = None;
            let mut per_run = Vec::with_capacity(anneal.runs);
            let mut n_feasible_runs = 0usize;
            for r in 0..anneal.runs.max(1) {
                cfg.seed = anneal.seed.wrapping_add(r as u64);
                let sol = sa_solve(model, &cfg).map_err(map_baseline_error)?;
                per_run.push(sol.objective);
                n_feasible_runs += sol.feasible as usize;
                let better = match &best {
                    Some(b) => sol.objective < b.objective,
                    None => true,
                };
                if better {
                    best = Some(sol);
                }
            }
            Ok(SolveOutcome {
                best: best.expect("at least one restart"),
                per_run,
                n_feasible_runs,
                trace: Vec::new(),
                final_mean_entropy: None,
                wall_time_s: started.elapsed().as_secs_f64(),
                schedule: None,
                sa: Some(SaEcho {
                    t_start: cfg.t_start,
                    t_end: cfg.t_end,
                    steps: cfg.steps,
                    schedule: match args.sa_schedule {
                        SaScheduleArg::Geometric => "geometric".into(),
                        SaScheduleArg::Linear => "linear".into(),
                    },
                    gibbs: cfg.gibbs,
                }),
            })
        }
        SolverArg::Greedy => {
            let started = Instant::now();
            let mut best: Option<DiscreteSolution> = None;
            let mut per_run = Vec::with_capacity(anneal.runs);
            let mut n_feasible_runs = 0usize;
            for r in 0..anneal.runs.max(1) {
                let sol = greedy_mis_seeded(model, anneal.seed.wrapping_add(r as u64))
                    .map_err(map_baseline_error)?;
                per_run.push(sol.objective);
                n_feasible_runs += sol.feasible as usize;
                let better = match &best {
                    Some(b) => sol.objective < b.objective,
                    None => true,
                };
                if better {
                    best = Some(sol);
                }
            }
            Ok(SolveOutcome {
                best: best.expect("at least one restart"),
                per_run,
                n_feasible_runs,
                trace: Vec::new(),
                final_mean_entropy: None,
                wall_time_s: started.elapsed().as_secs_f64(),
                schedule: None,
                sa: None,
            })
        }
        SolverArg::Brute => {
            let started = Instant::now();
            let best = brute_force(model).map_err(map_baseline_error)?;
            Ok(SolveOutcome {
                best: best.clone(),
                per_run: vec![best.objective],
                n_feasible_runs: best.feasible as usize,
                trace: Vec::new(),
                final_mean_entropy: None,
                wall_time_s: started.elapsed().as_secs_f64(),
                schedule: None,
                sa: None,
            })
        }
    }
}

fn run_solve(args: &SolveArgs) -> Result<(), CliError> {
    check_reference(args.reference)?;
    if args.repair && args.instance.problem != ProblemArg::Mis {
        return Err(CliError::Config("--repair only applies to --problem mis".into()));
    }
    let (model, source, meta) = build_model(&args.instance, args.lambda, args.auto_lambda)?;
    let outcome = solve_with(args, &model)?;

    let best_raw = model.raw_objective(&outcome.best.assignment);
    let metrics = compute_metrics(&model, &outcome.best, args.reference);
    let mut report = SolveReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config: ConfigEcho {
            problem: model.kind().name().into(),
            arity: model.arity(),
            lambda: model.lambda(),
            solver: args.solver.name().into(),
            runs: outcome.per_run.len(),
            seed: args.anneal.seed,
            reference: args.reference,
            schedule: outcome.schedule,
            comm_strength: matches!(args.solver, SolverArg::Pqqa)
                .then_some(args.anneal.comm_strength),
            entropy_alpha: matches!(args.solver, SolverArg::Pqqa)
                .then_some(args.anneal.entropy_alpha),
            sa: outcome.sa,
            repair: args.repair.then_some(true),
        },
        instance: InstanceInfo {
            source,
            n_nodes: model.graph().n_nodes(),
            n_edges: model.graph().n_edges(),
            total_weight: model.graph().total_weight(),
            meta,
        },
        result: ResultBlock {
            best_assignment: outcome.best.assignment.clone(),
            best_objective: outcome.best.objective,
            best_raw,
            penalty_violation: outcome.best.penalty_violation,
            feasible: outcome.best.feasible,
            per_run_objectives: outcome.per_run,
            n_feasible_runs: outcome.n_feasible_runs,
            final_mean_entropy: outcome.final_mean_entropy,
            wall_time_s: outcome.wall_time_s,
        },
        metrics,
        trace: outcome.trace,
    };
    if args.redact_timing {
        report.redact_timing();
    }
    let content = match args.report_format {
        ReportFormat::Json => render_json(&report),
        ReportFormat::Csv => render_csv(&report),
    };
    write_output(args.output.as_ref(), &content)
}

fn parse_values(values: &str) -> Result<Vec<f64>, CliError> {
    let parsed: Result<Vec<f64>, _> = values
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse::<f64>)
        .collect();
    let parsed =
        parsed.map_err(|e| CliError::Config(format!("bad --values entry: {e}")))?;
    if parsed.is_empty() {
        return Err(CliError::Config("--values must list at least one number".into()));
    }
    if parsed.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Config("--values entries must be finite".into()));
    }
    Ok(parsed)
}

fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    check_reference(args.reference)?;
    let values = parse_values(&args.values)?;
    let (model, _, _) = build_model(&args.instance, args.lambda, false)?;
    let entropy = EntropyConfig::new(args.anneal.entropy_alpha)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut rows = Vec::with_capacity(values.len() * args.sweep_seeds);
    for &value in &values {
        let mut schedule = args.anneal.schedule();
        let mut comm = CommConfig::new(args.anneal.comm_strength)
            .map_err(|e| CliError::Config(e.to_string()))?;
        match args.axis {
            AxisArg::Gamma0 => schedule.gamma_min = value,
            AxisArg::Steps => {
                if value < 1.0 || value.fract().abs() > 1e-9 {
                    return Err(CliError::Config(format!(
                        "steps values must be positive integers, got {value}"
                    )));
                }
                schedule.total_steps = value as usize;
                if args.anneal.eval_interval.is_none() {
                    schedule.eval_interval = (schedule.total_steps / 100).max(1);
                }
            }
            AxisArg::CommStrength => {
                comm = CommConfig::new(value).map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        for s in 0..args.sweep_seeds.max(1) {
            let seed = args.anneal.seed.wrapping_add(s as u64);
            let report =
                annealer::run(&model, args.anneal.runs, &schedule, entropy, comm, seed)
                    .map_err(map_anneal_error)?;
            rows.push(SweepRow {
                axis: args.axis.name().into(),
                value,
                seed,
                steps: schedule.total_steps,
                runs: args.anneal.runs,
                best_objective: report.best.objective,
                best_raw: report.best_raw,
                apr: args.reference.map(|r| report.best_raw / r),
                feasible: report.best.feasible,
                steps_to_99pct: steps_to_fraction(&report.trace, 0.01),
            });
        }
    }
    write_output(args.output.as_ref(), &render_sweep_csv(&rows))
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let corruption = match args.corrupt {
        Some(CorruptArg::MisGradient) => Corruption::MisGradient,
        None => Corruption::None,
    };
    let results = run_all(corruption);
    let mut failed = 0usize;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {} ({:.2}s): {}", r.name, r.seconds, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{}/{} checks passed", results.len() - failed, results.len());
    if failed > 0 {
        return Err(CliError::Verify(format!(
            "{failed} of {} checks failed",
            results.len()
        )));
    }
    Ok(())
}
