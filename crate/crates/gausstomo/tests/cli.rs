//! End-to-end tests of the `gausstomo` binary: the documented report
//! shapes, the exit-code contract (0 success, 2 parse, 3 validation,
//! 4 task failure), byte-level determinism, and reachability of every op
//! in the dispatch table.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

use gausstomo::problem::OP_TABLE;

const BIN: &str = env!("CARGO_BIN_EXE_gausstomo");

fn tmp_path(tag: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("cli-{tag}.json"))
}

fn write_problem(tag: &str, problem: &Value) -> PathBuf {
    let path = tmp_path(tag);
    fs::write(&path, serde_json::to_string_pretty(problem).unwrap()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary should spawn")
}

fn report_from(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout should be a JSON report")
}

fn q_function_problem() -> Value {
    json!({
        "version": "1",
        "entities": {
            "qf": {"kind": "q_function", "n_modes": 1}
        },
        "tasks": [
            {"op": "classify", "args": {"observable": "qf"}, "output_name": "qf_class"}
        ]
    })
}

#[test]
fn classify_reports_the_q_function_profile() {
    let path = write_problem("classify-qf", &q_function_problem());
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report = report_from(&out);
    let class = &report["tasks"][0]["outputs"]["classification"];
    assert_eq!(class["commutative"], Value::Bool(false));
    assert_eq!(class["sharp"], Value::Bool(false));
    assert_eq!(class["covariant"], Value::Bool(true));
    assert_eq!(class["ic"], Value::Bool(true));
}

#[test]
fn undefined_entity_reference_exits_3() {
    let path = write_problem(
        "undefined-ref",
        &json!({
            "version": "1",
            "entities": {},
            "tasks": [
                {"op": "classify", "args": {"observable": "ghost"}, "output_name": "t"}
            ]
        }),
    );
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ghost"));
}

#[test]
fn ic_set_of_two_quadratures_is_incomplete_with_witness() {
    let path = write_problem(
        "ic-set-pair",
        &json!({
            "version": "1",
            "entities": {
                "q0": {"kind": "quadrature", "direction": [1.0, 0.0]},
                "q90": {"kind": "quadrature", "direction": [0.0, 1.0]},
                "pair": {"kind": "set", "members": ["q0", "q90"]}
            },
            "tasks": [
                {"op": "ic-set", "args": {"set": "pair"}, "output_name": "decision"}
            ]
        }),
    );
    let out = run(&["ic-set", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let outputs = &report_from(&out)["tasks"][0]["outputs"];
    assert_eq!(outputs["ic"], Value::Bool(false));
    let witness = &outputs["witness"];
    assert!(witness.is_object(), "expected a witness, got {witness}");
    assert!(witness["max_law_deviation"].as_f64().unwrap() < 1e-10);
    assert!(witness["state_separation"].as_f64().unwrap() > 1e-3);
}

#[test]
fn reports_are_byte_identical_for_the_same_seed() {
    let path = write_problem(
        "determinism",
        &json!({
            "version": "1",
            "entities": {
                "law": {"kind": "distribution", "mean": [0.5, -0.5],
                        "cov": [[2.0, 0.3], [0.3, 1.0]]}
            },
            "tasks": [
                {"op": "sample", "args": {"distribution": "law", "count": 400},
                 "output_name": "draws"}
            ]
        }),
    );
    let input = path.to_str().unwrap();
    let first = run(&["sample", "--input", input, "--seed", "7"]);
    let second = run(&["sample", "--input", input, "--seed", "7"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "same seed must reproduce the report bytes");

    let other = run(&["sample", "--input", input, "--seed", "8"]);
    assert_ne!(first.stdout, other.stdout, "the seed must reach the sampler");

    // --output writes exactly the bytes that stdout would carry.
    let out_path = tmp_path("determinism-out");
    let piped = run(&[
        "sample", "--input", input, "--seed", "7",
        "--output", out_path.to_str().unwrap(),
    ]);
    assert_eq!(piped.status.code(), Some(0));
    assert!(piped.stdout.is_empty());
    assert_eq!(fs::read(&out_path).unwrap(), first.stdout);
}

#[test]
fn subcommand_without_matching_task_exits_3() {
    let path = write_problem("mismatch", &q_function_problem());
    let out = run(&["witness", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unreadable_or_malformed_input_exits_2() {
    let bad = tmp_path("malformed");
    fs::write(&bad, "{ not json").unwrap();
    let out = run(&["classify", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = run(&["classify", "--input", "/nonexistent/problem.json"]);
    assert_eq!(missing.status.code(), Some(2));

    let no_input = run(&["classify"]);
    assert_eq!(no_input.status.code(), Some(2));
}

#[test]
fn task_failure_exits_4_and_writes_the_partial_report() {
    // Sharp quadratures are not informationally complete, so the covariant
    // decomposition in the second task must fail after the first succeeds.
    let path = write_problem(
        "task-failure",
        &json!({
            "version": "1",
            "entities": {
                "qf": {"kind": "q_function", "n_modes": 1},
                "q0": {"kind": "quadrature", "direction": [1.0, 0.0]}
            },
            "tasks": [
                {"op": "classify", "args": {"observable": "qf"}, "output_name": "ok_task"},
                {"op": "decompose-covariant", "args": {"observable": "q0"},
                 "output_name": "boom"}
            ]
        }),
    );
    let out_path = tmp_path("task-failure-out");
    let out = run(&[
        "classify",
        "--input", path.to_str().unwrap(),
        "--output", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));

    let partial: Value = serde_json::from_slice(&fs::read(&out_path).unwrap()).unwrap();
    let tasks = partial["tasks"].as_array().unwrap();
    assert_eq!(tasks.len(), 2);
    assert!(tasks[0]["outputs"].is_object());
    assert!(tasks[1]["error"].is_string());
}

#[test]
fn every_op_in_the_dispatch_table_is_reachable() {
    let dim = 6;
    let mut vacuum_re = vec![vec![0.0; dim]; dim];
    vacuum_re[0][0] = 1.0;
    let zeros = vec![vec![0.0; dim]; dim];
    let eye4: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let thetas: Vec<f64> = (0..6).map(|k| k as f64 * std::f64::consts::PI / 6.0).collect();

    let problem = json!({
        "version": "1",
        "entities": {
            "vac": {"kind": "state", "n_modes": 1, "m": [0.1, -0.2],
                    "v": [[1.0, 0.0], [0.0, 1.0]]},
            "qf": {"kind": "q_function", "n_modes": 1},
            "q0": {"kind": "quadrature", "direction": [1.0, 0.0]},
            "q90": {"kind": "quadrature", "direction": [0.0, 1.0]},
            "pair": {"kind": "set", "members": ["q0", "q90"]},
            "dirs": {"kind": "rotated_family", "thetas": thetas},
            "dil": {"kind": "dilation", "s": eye4, "d": [0.0, 0.0, 0.0, 0.0],
                    "ancilla": {"n_modes": 1, "m": [0.0, 0.0],
                                "v": [[1.0, 0.0], [0.0, 1.0]]},
                    "kept_modes": 1},
            "bos_fock": {"kind": "bosonic_covariant_fock",
                         "sigma": {"re": vacuum_re, "im": zeros}},
            "bos_fejer": {"kind": "bosonic_smeared", "base": "qf",
                          "noise": {"profile": "fejer", "width": 3.0}}
        },
        "tasks": [
            {"op": "validate", "args": {"target": "vac"}, "output_name": "vac_summary"},
            {"op": "classify", "args": {"observable": "qf"}, "output_name": "qf_class"},
            {"op": "smear", "args": {"observable": "qf", "c": [[1.0, 0.0], [0.0, 1.0]],
                                     "d": [0.5, -0.5]},
             "output_name": "qf_smeared"},
            {"op": "postprocess", "args": {"observable": "qf", "p": [[1.0, 0.0], [0.0, 1.0]]},
             "output_name": "qf_post"},
            {"op": "marginal", "args": {"observable": "qf", "direction": [1.0, 0.0]},
             "output_name": "qf_marginal"},
            {"op": "ic-single", "args": {"observable": "qf"}, "output_name": "qf_ic"},
            {"op": "ic-set", "args": {"set": "pair"}, "output_name": "pair_ic"},
            {"op": "subspace-span", "args": {"set": "pair"}, "output_name": "pair_span"},
            {"op": "coverage", "args": {"directions": "dirs", "probe_grid_size": 1000},
             "output_name": "dirs_coverage"},
            {"op": "witness", "args": {"set": "pair"}, "output_name": "pair_witness"},
            {"op": "dilate", "args": {"dilation": "dil"}, "output_name": "dil_channel"},
            {"op": "channel-from-obs", "args": {"observable": "qf"},
             "output_name": "qf_channel"},
            {"op": "obs-from-channel", "args": {"channel": "qf_channel"},
             "output_name": "qf_back"},
            {"op": "pushforward", "args": {"observable": "qf_back", "state": "vac"},
             "output_name": "law"},
            {"op": "apply-channel", "args": {"channel": "dil_channel", "state": "vac"},
             "output_name": "vac_out"},
            {"op": "compose", "args": {"outer": "qf_channel", "inner": "dil_channel"},
             "output_name": "chained"},
            {"op": "sample", "args": {"distribution": "law", "count": 500},
             "output_name": "draws"},
            {"op": "reconstruct", "args": {"observations": [
                {"observable": "qf_back", "distribution": "law"}
            ]}, "output_name": "estimate"},
            {"op": "decompose-covariant", "args": {"observable": "qf"},
             "output_name": "qf_decomposition"},
            {"op": "bosonic-probe", "args": {"bosonic": "bos_fock",
                                             "points_per_axis": 15, "range": 2.0},
             "output_name": "fock_probe"},
            {"op": "bosonic-verdict", "args": {"observables": ["bos_fejer"],
                                               "points_per_axis": 15, "range": 3.0},
             "output_name": "fejer_verdict"},
            {"op": "oracle-check", "args": {"state": "vac", "observable": "qf"},
             "output_name": "oracle"}
        ]
    });

    // The fixture must exercise exactly the ops the dispatch table declares.
    let used: std::collections::BTreeSet<&str> = problem["tasks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["op"].as_str().unwrap())
        .collect();
    let declared: std::collections::BTreeSet<&str> =
        OP_TABLE.iter().map(|(op, _)| *op).collect();
    assert_eq!(used, declared, "fixture and dispatch table disagree");

    let path = write_problem("dispatch-table", &problem);
    let out = run(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = report_from(&out);
    let tasks = report["tasks"].as_array().unwrap();
    assert_eq!(tasks.len(), OP_TABLE.len());
    for task in tasks {
        assert!(
            task["outputs"].is_object(),
            "op {} produced no outputs",
            task["op"]
        );
        assert!(task["inputs_digest"].as_str().unwrap().len() == 64);
    }

    // Spot checks across the chain: identity-dilation channel is valid,
    // the extracted observable matches the Q-function, and reconstruction
    // from the exact law recovers the input state.
    assert_eq!(tasks[10]["outputs"]["ok"], Value::Bool(true));
    let back = &tasks[12]["outputs"]["classification"];
    assert_eq!(back["covariant"], Value::Bool(true));
    assert_eq!(back["ic"], Value::Bool(true));
    let est = &tasks[17]["outputs"];
    assert_eq!(est["valid"], Value::Bool(true));
    let m = est["state"]["m"].as_array().unwrap();
    assert!((m[0].as_f64().unwrap() - 0.1).abs() < 1e-9);
    assert!((m[1].as_f64().unwrap() + 0.2).abs() < 1e-9);
    let oracle = &tasks[21]["outputs"];
    assert!(oracle["max_weyl_deviation"].as_f64().unwrap() < 1e-6);
    assert!(oracle["max_char_deviation"].as_f64().unwrap() < 1e-6);
}
