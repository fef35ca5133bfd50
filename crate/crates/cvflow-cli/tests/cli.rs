use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cvflow::open_graph::serialize_graph;
use cvflow::{fixtures, PrimeField};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cvflow"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cvflow")
}

fn run_graph(cmd: &str, graph: &str, extra: &[&str]) -> Output {
    let g = data(graph);
    let mut args = vec![cmd, "--graph", g.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

/// Validates `v` against `schemas/<name>.schema.json`.
fn assert_schema(name: &str, v: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("schemas/{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator
        .iter_errors(v)
        .map(|e| format!("{e} at {}", e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{name} schema violations: {errors:?}");
}

fn write_adder(dir: &Path, n: usize, d: u64) -> PathBuf {
    let g = fixtures::adder(PrimeField::new(d).unwrap(), n).unwrap();
    let path = dir.join(format!("adder{n}.json"));
    std::fs::write(&path, serialize_graph(&g)).unwrap();
    path
}

#[test]
fn flow_on_hexagon_over_reals_is_cv_flow() {
    let o = run_graph("flow", "hexagon.json", &[]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("flow", &v);
    assert_eq!(v["verdict"], "cv_flow");
    assert_eq!(v["depth"], 1);
    assert_eq!(v["layers"][0], serde_json::json!(["o1", "o2", "o3"]));
    let v3 = v["corrections"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["vertex"] == "v3")
        .unwrap();
    let amounts: Vec<f64> = v3["vector"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["amount"].as_f64().unwrap())
        .collect();
    assert_eq!(amounts, [-0.5, 0.5, 0.5]);
    assert!(v.get("gflow").is_none());
    assert!(String::from_utf8_lossy(&o.stderr).contains("cv_flow"));
}

#[test]
fn flow_on_hexagon_over_z2_is_none() {
    let o = run_graph("flow", "hexagon.json", &["--field", "mod", "--d", "2"]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_schema("flow", &v);
    assert_eq!(v["verdict"], "none");
    assert_eq!(v["gflow"], false);
}

#[test]
fn flow_on_gflow_fixture_over_reals_is_none_but_z2_has_gflow() {
    let o = run_graph("flow", "gflow_not_cvflow.json", &[]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["verdict"], "none");
    let o = run_graph("flow", "gflow_not_cvflow.json", &["--d", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("flow", &v);
    assert_eq!(v["gflow"], true);
}

#[test]
fn flow_on_line_is_causal() {
    let o = run_graph("flow", "line.json", &[]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("flow", &v);
    assert_eq!(v["verdict"], "causal_flow");
    assert_eq!(v["layers"], serde_json::json!([["o"], ["m"], ["i"]]));
}

#[test]
fn extract_line_is_one_wire_with_two_teleports() {
    let angles = data("angles_line.json");
    let o = run_graph(
        "extract",
        "line.json",
        &["--angles", angles.to_str().unwrap()],
    );
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("extract", &v);
    assert_eq!(v["wires"].as_array().unwrap().len(), 1);
    assert_eq!(v["counts"], serde_json::json!({"J": 2}));
    assert_eq!(v["gates"][0]["angles"], serde_json::json!([1, 2, 0]));
    assert_eq!(v["gates"][1]["from"], "m");
}

#[test]
fn extract_refuses_unequal_io() {
    let o = run_graph("extract", "lone_output.json", &[]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_schema("refusal", &v);
    assert_eq!(v["reason"], "io_mismatch");
}

#[test]
fn extract_refuses_graphs_without_flow() {
    let o = run_graph("extract", "gflow_not_cvflow.json", &[]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_schema("refusal", &v);
    assert_eq!(v["reason"], "no_flow");
}

#[test]
fn extract_adder_is_a_staircase() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_adder(dir.path(), 4, 5);
    let o = run(&["extract", "--graph", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("extract", &v);
    assert_eq!(v["wires"].as_array().unwrap().len(), 4);
    let kinds: Vec<&str> = v["gates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["J", "CZ", "J", "CZ", "J", "CZ", "J"]);
    for cz in v["gates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|g| g["kind"] == "CZ")
    {
        assert_eq!(cz["weight"], 4);
    }
}

#[test]
fn extract_output_is_byte_stable() {
    for format in ["json", "ascii"] {
        let a = run_graph("extract", "two_layer.json", &["--format", format]);
        let b = run_graph("extract", "two_layer.json", &["--format", format]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{format} output differs between runs");
    }
    let ascii = run_graph("extract", "two_layer.json", &["--format", "ascii"]);
    assert_eq!(String::from_utf8(ascii.stdout).unwrap().lines().count(), 3);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("c.json");
    let to_file = run_graph(
        "extract",
        "two_layer.json",
        &["--out", target.to_str().unwrap()],
    );
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    let to_stdout = run_graph("extract", "two_layer.json", &[]);
    assert_eq!(std::fs::read(&target).unwrap(), to_stdout.stdout);
}

#[test]
fn verify_line_over_z3_passes() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixtures::line(PrimeField::new(3).unwrap(), 2).unwrap();
    let path = dir.path().join("edge.json");
    std::fs::write(&path, serialize_graph(&g)).unwrap();
    let o = run(&[
        "verify",
        "--graph",
        path.to_str().unwrap(),
        "--random-inputs",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("verify", &v);
    assert_eq!(v["passed"], true);
    assert_eq!(v["inputs"], 3);
    assert_eq!(v["policy"]["branches_per_input"], 3.0);
    assert_eq!(v["branch_count"], 9);
    assert_eq!(v["measurement_order"], serde_json::json!(["v0"]));
}

#[test]
fn verify_two_layer_over_z5_passes() {
    let o = run_graph(
        "verify",
        "two_layer.json",
        &["--max-basis", "2", "--random-inputs", "1"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_schema("verify", &v);
    assert_eq!(v["branch_count"], 3 * 5i64.pow(6));
    assert!(v["min_fidelity"].as_f64().unwrap() > 1.0 - 1e-9);
}

#[test]
fn verify_with_corrupted_correction_fails() {
    let o = run_graph(
        "verify",
        "two_layer.json",
        &["--max-basis", "1", "--random-inputs", "0", "--corrupt", "d"],
    );
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_schema("verify", &v);
    assert_eq!(v["passed"], false);
    assert_eq!(v["corrupted"], "d");
    let low = v["branches"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|b| b["fidelity"].as_f64().is_some_and(|f| f < 0.99))
        .count();
    assert!(low > 0);
}

#[test]
fn sampled_branches_are_seeded() {
    let args = [
        "--branches",
        "sample:40:9",
        "--max-basis",
        "1",
        "--random-inputs",
        "1",
    ];
    let a = run_graph("verify", "two_layer.json", &args);
    let b = run_graph("verify", "two_layer.json", &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_schema("verify", &v);
    assert_eq!(v["policy"]["mode"], "sampled");
    assert_eq!(v["branch_count"], 80);
}

#[test]
fn exhaustive_over_budget_falls_back_to_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixtures::line(PrimeField::new(5).unwrap(), 11).unwrap();
    let path = dir.path().join("long.json");
    std::fs::write(&path, serialize_graph(&g)).unwrap();
    let o = run(&[
        "verify",
        "--graph",
        path.to_str().unwrap(),
        "--max-basis",
        "1",
        "--random-inputs",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("verify", &v);
    assert_eq!(v["policy"]["mode"], "sampled");
    assert_eq!(v["policy"]["fallback"], true);
    assert_eq!(v["branch_count"], 1000);
}

#[test]
fn simulate_line_has_uniform_branches() {
    let o = run_graph("simulate", "line.json", &["--input", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("simulate", &v);
    let branches = v["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 9);
    for b in branches {
        assert!((b["probability"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-9);
        assert_eq!(b["state"].as_array().unwrap().len(), 3);
    }
    assert_eq!(v["measurement_order"], serde_json::json!(["i", "m"]));
}

#[test]
fn simulate_needs_a_prime_field() {
    let o = run_graph("simulate", "hexagon.json", &[]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ℤ_d"));
}

#[test]
fn demo_adder_sums_its_inputs() {
    let o = run(&["demo", "adder", "--n", "3", "--d", "5", "--inputs", "1,2,3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("demo", &v);
    assert_eq!(v["layers"], 1);
    assert_eq!(v["output_digit"], 1);
    assert_eq!(v["expected_digit"], 1);
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn demo_fixtures_report_their_verdicts() {
    let o = run(&["demo", "gflow_not_cvflow"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("demo", &v);
    assert_eq!(
        (v["gflow"].as_bool(), v["cv_flow"].as_bool()),
        (Some(true), Some(false))
    );
    let o = run(&["demo", "cvflow_not_gflow", "--d", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_schema("demo", &v);
    assert_eq!(
        (v["gflow"].as_bool(), v["cv_flow"].as_bool()),
        (Some(false), Some(true))
    );
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn usage_and_input_errors_exit_with_one() {
    assert_eq!(code(&run(&["demo", "no_such_demo"])), 1);
    assert_eq!(
        code(&run_graph(
            "verify",
            "line.json",
            &["--branches", "sample:0:1"]
        )),
        1
    );
    assert_eq!(code(&run_graph("flow", "line.json", &["--d", "4"])), 1);
    assert_eq!(
        code(&run_graph("flow", "line.json", &["--format", "ascii"])),
        1
    );
    assert_eq!(code(&run(&["flow", "--graph", "/does/not/exist.json"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn malformed_documents_report_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        "{\n  \"field\": {\"kind\": \"real\"},\n  \"vertices\": [\"a\",]\n}\n",
    )
    .unwrap();
    let o = run(&["flow", "--graph", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}
