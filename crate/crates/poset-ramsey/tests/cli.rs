//! End-to-end checks of the binary: exit-code contract, file round-trips,
//! and single-document JSON output.

use std::path::Path;
use std::process::{Command, Output};

use poset_ramsey::lattice::LatticeColoring;
use poset_ramsey::search::RamseyWitness;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poset-ramsey"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("stdout is not one JSON doc: {e}\n{text}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("a3.json");

    let out = run(&["construct", "a3", "--n", "2", "--out", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let coloring: LatticeColoring =
        serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(coloring.dim(), 4);

    let out = run(&["verify", path_str(&file), "--t", "3", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0), "both claims certified");

    // JSON mode emits a single document.
    let out = run(&["verify", path_str(&file), "--t", "3", "--n", "2", "--format", "json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["all_certified"], true);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_refutation_exit_code() {
    let dir = tempfile::tempdir().unwrap();

    // All-red Q_3 contains a red Q_1.
    let file = dir.path().join("red.json");
    std::fs::write(&file, r#"{"n":3,"blue":"00"}"#).unwrap();
    let out = run(&["verify", path_str(&file), "--n", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["checks"][0]["result"], "refuted");

    // Layered(1,1) has a blue antichain of size 4.
    let layered = dir.path().join("layered.json");
    let out = run(&[
        "construct", "layered", "--n", "1", "--r", "1", "--out", path_str(&layered),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", path_str(&layered), "--t", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(3));
    let doc = stdout_json(&out);
    assert_eq!(doc["checks"][0]["antichain"].as_array().unwrap().len(), 4);

    // But it is certified at t = 5.
    let out = run(&["verify", path_str(&layered), "--t", "5"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn construct_rejects_bad_parameters() {
    let out = run(&["construct", "a2", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["construct", "layered", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1), "layered requires --r");
}

#[test]
fn search_reports_and_witness_files() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("witness.json");

    let out = run(&[
        "search", "--t", "2", "--n", "1", "--nmax", "4",
        "--out", path_str(&witness), "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["exact"], 3);
    let w: RamseyWitness =
        serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(w.dim, 3);

    let out = run(&["search", "--t", "3", "--n", "1", "--nmax", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["exact"], 4);
}

#[test]
fn search_budget_exhaustion_exit_code() {
    let out = run(&[
        "search", "--t", "3", "--n", "2", "--nmax", "5", "--budget", "5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_trace_and_error_paths() {
    let dir = tempfile::tempdir().unwrap();

    // An antichain-free input: the two-blue-vertex coloring of Q_5.
    let escaping = dir.path().join("a2.json");
    let out = run(&["construct", "a2", "--n", "4", "--out", path_str(&escaping)]);
    assert_eq!(out.status.code(), Some(0));
    let trace_file = dir.path().join("trace.json");
    let out = run(&[
        "pipeline", path_str(&escaping), "--t", "3", "--out", path_str(&trace_file),
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["cube_dim"], 2);
    assert!(trace_file.exists());

    // Input with a blue antichain: exit 1, antichain printed.
    let layered = dir.path().join("layered.json");
    run(&["construct", "layered", "--n", "2", "--r", "1", "--out", path_str(&layered)]);
    let out = run(&["pipeline", path_str(&layered), "--t", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["error"], "blue antichain present");
    assert_eq!(doc["antichain"].as_array().unwrap().len(), 3);

    // Unparseable file: exit 1.
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "not json").unwrap();
    let out = run(&["pipeline", path_str(&junk), "--t", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tools_outputs() {
    let out = run(&["tools", "scd", "--n", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["chains"].as_array().unwrap().len(), 6);

    let out = run(&["tools", "bounds", "--n", "100", "--t", "3", "--format", "json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["exact"], 103);
    let out = run(&["tools", "bounds", "--n", "100", "--t", "3"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("= 103"));

    let dir = tempfile::tempdir().unwrap();
    let elems = dir.path().join("elems.json");
    std::fs::write(&elems, "[0, 1, 2]").unwrap(); // {}, {0}, {1}
    let out = run(&["tools", "dilworth", path_str(&elems), "--format", "json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["cover"]["chains"].as_array().unwrap().len(), 2);
    assert_eq!(doc["max_antichain"].as_array().unwrap().len(), 2);

    let orderings = dir.path().join("orderings.json");
    std::fs::write(&orderings, "[[0,1,2,3,4],[4,3,2,1,0]]").unwrap();
    let out = run(&["tools", "triple", path_str(&orderings)]);
    assert_eq!(out.status.code(), Some(0));
    let triple: Vec<u32> =
        serde_json::from_str(String::from_utf8_lossy(&out.stdout).trim()).unwrap();
    assert_eq!(triple.len(), 3);

    // Red-cube search over a constructed coloring file.
    let a3 = dir.path().join("a3.json");
    run(&["construct", "a3", "--n", "2", "--out", path_str(&a3)]);
    let out = run(&["tools", "redcube", path_str(&a3), "--n", "2", "--format", "json"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["found"], false);
    let out = run(&["tools", "redcube", path_str(&a3), "--n", "5"]);
    assert_eq!(out.status.code(), Some(1), "n exceeds the dimension");
}

#[test]
fn text_mode_renders_small_lattices() {
    let out = run(&["construct", "a2", "--n", "1"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("size 0:"));
    assert!(text.contains("{}:B"));
}
