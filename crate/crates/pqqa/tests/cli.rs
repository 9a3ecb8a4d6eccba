//! Command-line interface tests: report structure, exit codes, input
//! parsing, sweep output, and the self-check command.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pqqa"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn solve_report_has_expected_shape() {
    let out = run(&[
        "solve", "--problem", "mis", "--gen", "er:n=20,p=0.2", "--solver", "pqqa", "--runs", "5",
        "--steps", "200", "--seed", "1",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["config"]["problem"], "mis");
    assert_eq!(report["config"]["solver"], "pqqa");
    assert_eq!(report["config"]["runs"], 5);
    assert_eq!(report["instance"]["n_nodes"], 20);
    assert_eq!(report["result"]["best_assignment"].as_array().unwrap().len(), 20);
    assert_eq!(report["result"]["per_run_objectives"].as_array().unwrap().len(), 5);
    assert!(report["result"]["feasible"].is_boolean());
    let trace = report["trace"].as_array().unwrap();
    assert_eq!(trace.first().unwrap()["step"], 0);
    assert_eq!(trace.last().unwrap()["step"], 200);
    assert!(report["result"]["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn solve_csv_report_has_header_and_row() {
    let out = run(&[
        "solve", "--problem", "maxcut", "--gen", "er:n=15,p=0.3", "--solver", "sa", "--runs", "3",
        "--steps", "500", "--report-format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "problem,solver,n_nodes,n_edges,runs,steps,seed,best_objective,best_raw,feasible,apr,wall_time_s"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("maxcut,sa,15,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn brute_solver_matches_on_tiny_instance_and_reports_reference_apr() {
    let out = run(&[
        "solve", "--problem", "mis", "--gen", "er:n=8,p=0.3", "--solver", "brute", "--reference",
        "4",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["config"]["solver"], "brute");
    assert!(report["result"]["feasible"].as_bool().unwrap());
    assert!(report["metrics"]["apr"].is_number());
}

#[test]
fn dimacs_file_input_is_detected_and_parsed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toy.col");
    std::fs::write(&path, "c toy instance\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n").unwrap();
    let out = run(&[
        "solve", "--problem", "coloring", "--colors", "2", "--file", path.to_str().unwrap(),
        "--solver", "brute",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["instance"]["n_nodes"], 4);
    assert_eq!(report["instance"]["n_edges"], 3);
    // A path is 2-colorable, so the optimum has zero conflicts.
    assert_eq!(report["result"]["best_objective"], 0.0);
}

#[test]
fn weighted_edgelist_input_is_parsed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("toy.txt");
    std::fs::write(&path, "3 2\n0 1 2.5\n1 2 -1\n").unwrap();
    let out = run(&[
        "solve", "--problem", "maxcut", "--file", path.to_str().unwrap(), "--solver", "brute",
    ]);
    let report = stdout_json(&out);
    assert_eq!(report["instance"]["n_edges"], 2);
    assert_eq!(report["instance"]["total_weight"], 1.5);
    // Best cut takes only the positive edge: raw objective 2.5.
    assert_eq!(report["result"]["best_raw"], 2.5);
}

#[test]
fn output_flag_writes_file_with_same_content() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "solve", "--problem", "mis", "--gen", "er:n=10,p=0.2", "--solver", "greedy", "--runs",
        "2", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"schema_version\""));
    serde_json::from_str::<serde_json::Value>(&written).expect("file is JSON");
}

#[test]
fn missing_input_file_exits_3_without_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-graph.txt");
    let output = dir.path().join("report.json");
    let out = run(&[
        "solve", "--problem", "mis", "--file", missing.to_str().unwrap(), "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!Path::new(&output).exists(), "no output file on failure");
    assert!(String::from_utf8_lossy(&out.stderr).contains("no-such-graph"));
}

#[test]
fn config_errors_exit_2() {
    // Unknown generator family.
    let out = run(&["solve", "--problem", "mis", "--gen", "unknown:n=5"]);
    assert_eq!(out.status.code(), Some(2));
    // Partition requires a part count.
    let out = run(&["solve", "--problem", "partition", "--gen", "er:n=10,p=0.2"]);
    assert_eq!(out.status.code(), Some(2));
    // --file and --gen are mutually exclusive (native argument-group error).
    let out = run(&["solve", "--problem", "mis", "--gen", "er:n=5,p=0.5", "--file", "x.txt"]);
    assert_eq!(out.status.code(), Some(2));
    // Fixed and automatic penalty weights conflict.
    let out = run(&[
        "solve", "--problem", "mis", "--gen", "er:n=5,p=0.5", "--lambda", "2", "--auto-lambda",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // Colors flag is rejected for a binary problem.
    let out = run(&["solve", "--problem", "mis", "--gen", "er:n=5,p=0.5", "--colors", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_emits_one_row_per_value_and_seed() {
    let out = run(&[
        "sweep", "--problem", "mis", "--gen", "er:n=15,p=0.2", "--runs", "4", "--steps", "200",
        "--axis", "comm_strength", "--values", "0,0.2,0.4", "--sweep-seeds", "2",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "axis,value,seed,steps,runs,best_objective,best_raw,apr,feasible,steps_to_99pct"
    );
    assert_eq!(lines.len(), 1 + 3 * 2);
    assert!(lines[1].starts_with("comm_strength,0,"));
}

#[test]
fn sweep_rejects_fractional_step_values() {
    let out = run(&[
        "sweep", "--problem", "mis", "--gen", "er:n=15,p=0.2", "--axis", "steps", "--values",
        "100.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gamma_sweep_accepts_negative_values() {
    let out = run(&[
        "sweep", "--problem", "mis", "--gen", "er:n=15,p=0.2", "--runs", "4", "--steps", "200",
        "--axis", "gamma0", "--values", "-2,-1", "--sweep-seeds", "1",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn verify_passes_clean_and_catches_injected_defect() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("10/10 checks passed"), "got: {text}");

    let out = run(&["verify", "--corrupt", "mis-gradient"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL] model-gradients-binary"), "got: {text}");
    assert!(text.contains("9/10 checks passed"), "got: {text}");
}

#[test]
fn repair_flag_yields_feasible_independent_sets() {
    let out = run(&[
        "solve", "--problem", "mis", "--gen", "er:n=40,p=0.3", "--solver", "pqqa", "--runs", "5",
        "--steps", "100", "--gamma-min", "-0.1", "--repair",
    ]);
    let report = stdout_json(&out);
    assert!(report["result"]["feasible"].as_bool().unwrap());
    assert_eq!(report["config"]["repair"], true);
}
