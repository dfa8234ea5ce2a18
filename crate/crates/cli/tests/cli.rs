use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn graphlabel(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphlabel"))
        .args(args)
        .current_dir(dir)
        .env_remove("GRAPHLABEL_SEED")
        .output()
        .expect("binary runs")
}

fn json_report(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = graphlabel(dir, &all);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value)
}

#[test]
fn gen_writes_edge_list_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = graphlabel(
        dir.path(),
        &["gen", "--spec", "hypercube:4", "--out", "q4.el"],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("q4.el")).unwrap();
    assert_eq!(text.lines().next(), Some("16 32"));
    assert_eq!(text.lines().count(), 33);
}

#[test]
fn distance_labels_evaluate_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(
        graphlabel(p, &["gen", "--spec", "hypercube:4", "--out", "q4.el"])
            .status
            .success()
    );
    let (code, label) = json_report(
        p,
        &[
            "label",
            "--in",
            "q4.el",
            "--kind",
            "distance",
            "--r",
            "2",
            "--order",
            "degeneracy",
            "--out",
            "q4.r2.json",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(label["decoder"], "distance");
    let (code, eval) = json_report(p, &["eval", "--dump", "q4.r2.json", "--in", "q4.el"]);
    assert_eq!(code, 0);
    assert_eq!(eval["errors"], 0);
    assert_eq!(eval["pairs"], 120);
}

#[test]
fn eval_detects_wrong_graph() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    graphlabel(
        p,
        &[
            "label",
            "--spec",
            "path:6",
            "--kind",
            "adjacency",
            "--out",
            "p.json",
        ],
    );
    let (code, eval) = json_report(p, &["eval", "--dump", "p.json", "--spec", "cycle:6"]);
    assert_eq!(code, 2);
    assert_eq!(eval["errors"], 1);
}

#[test]
fn sketches_are_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    graphlabel(
        p,
        &[
            "label",
            "--spec",
            "grid:6,6",
            "--kind",
            "adjacency",
            "--out",
            "g.json",
        ],
    );
    graphlabel(
        p,
        &[
            "sketch", "--labels", "g.json", "--seed", "9", "--out", "a.json",
        ],
    );
    let out = Command::new(env!("CARGO_BIN_EXE_graphlabel"))
        .args(["sketch", "--labels", "g.json", "--out", "b.json", "--json"])
        .current_dir(p)
        .env("GRAPHLABEL_SEED", "9")
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["seed"], 9);
    graphlabel(
        p,
        &[
            "sketch", "--labels", "g.json", "--seed", "10", "--out", "c.json",
        ],
    );
    let read = |f: &str| std::fs::read(p.join(f)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_ne!(read("a.json"), read("c.json"));

    let (code, eval) = json_report(
        p,
        &[
            "eval",
            "--dump",
            "a.json",
            "--spec",
            "grid:6,6",
            "--predicate",
            "adjacency",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(eval["positives"]["errors"], 0);
}

#[test]
fn monte_carlo_eval_of_compiled_labels() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    graphlabel(
        p,
        &[
            "label",
            "--spec",
            "random_tree:40,1",
            "--kind",
            "forest",
            "--out",
            "t.json",
        ],
    );
    let (code, eval) = json_report(
        p,
        &[
            "eval",
            "--dump",
            "t.json",
            "--spec",
            "random_tree:40,1",
            "--trials",
            "200",
            "--seed",
            "3",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(eval["mode"], "monte_carlo");
    assert_eq!(eval["false_negative_rate"], 0.0);
    assert_eq!(eval["seed"], 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(graphlabel(p, &["--bogus"]).status.code(), Some(64));
    assert_eq!(
        graphlabel(p, &["gen", "--spec", "petersen", "--nope"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(graphlabel(p, &["teleport"]).status.code(), Some(64));
    assert_eq!(graphlabel(p, &["--help"]).status.code(), Some(0));
    assert_eq!(graphlabel(p, &["--version"]).status.code(), Some(0));
    assert_eq!(
        graphlabel(p, &["eval", "--dump", "missing.json", "--spec", "petersen"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        graphlabel(p, &["gen", "--spec", "hypercube:99"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(graphlabel(p, &[]).status.code(), Some(64));
}

#[test]
fn dump_version_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    graphlabel(
        p,
        &[
            "label",
            "--spec",
            "path:4",
            "--kind",
            "adjacency",
            "--out",
            "p.json",
        ],
    );
    let text = std::fs::read_to_string(p.join("p.json")).unwrap();
    std::fs::write(
        p.join("p2.json"),
        text.replacen("\"version\":1", "\"version\":2", 1),
    )
    .unwrap();
    let out = graphlabel(p, &["eval", "--dump", "p2.json", "--spec", "path:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("version"));
}

#[test]
fn config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let (code, first) = json_report(
        p,
        &[
            "partition",
            "--spec",
            "grid:10,10",
            "--delta",
            "8",
            "--rate",
            "2",
            "--seed",
            "5",
            "--save-config",
            "run.toml",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(first["seed"], 5);
    let (code, second) = json_report(p, &["--config", "run.toml"]);
    assert_eq!(code, 0);
    assert_eq!(first, second);
    let saved = std::fs::read_to_string(p.join("run.toml")).unwrap();
    assert!(saved.contains("seed = 5"));
}

#[test]
fn tree_cover_adt_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = json_report(
        dir.path(),
        &[
            "adt",
            "--spec",
            "random_tree:200,4",
            "--kind",
            "tree-cover",
            "--r",
            "2",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(r["errors"], 0);
    assert_eq!(r["alpha"], 8.0);
}

#[test]
fn pds_report_echoes_seed_and_bits() {
    let dir = tempfile::tempdir().unwrap();
    let (_, r) = json_report(
        dir.path(),
        &[
            "adt",
            "--spec",
            "grid:10,10",
            "--kind",
            "pds",
            "--r",
            "1",
            "--beta",
            "2",
            "--delta",
            "0.1",
            "--trials",
            "200",
            "--seed",
            "11",
        ],
    );
    assert_eq!(r["seed"], 11);
    assert_eq!(r["bits"], 2);
    assert_eq!(r["partition_delta"], 10.0);
}

#[test]
fn audits_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let (code, r) = json_report(
        p,
        &[
            "audit", "--spec", "petersen", "--kind", "girth", "--alpha", "3", "--trials", "50",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(r["audit"]["violations"].as_array().unwrap().len(), 0);
    let (code, _) = json_report(p, &["audit", "--spec", "cycle:9", "--kind", "gadget"]);
    assert_eq!(code, 0);
    let (code, _) = json_report(
        p,
        &[
            "audit",
            "--spec",
            "petersen",
            "--kind",
            "subdivision",
            "--k",
            "2",
        ],
    );
    assert_eq!(code, 0);
    let (_, r) = json_report(
        p,
        &["bounds", "--kind", "wcol", "--class", "planar", "--r", "2"],
    );
    assert_eq!(r["wcol_upper_bound"], "30");
    let (code, r) = json_report(
        p,
        &[
            "bounds",
            "--kind",
            "counting",
            "--spec",
            "complete:4",
            "--tables",
            "5",
        ],
    );
    assert_eq!(code, 0);
    assert!(r["max_good"].as_u64().unwrap() <= 7);
    let (_, r) = json_report(p, &["bounds", "--kind", "preset", "--class", "genus:0"]);
    assert_eq!(r["preset"]["t"], 5);
}

#[test]
fn bench_runs_a_suite() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(
        p.join("suite.toml"),
        "[[instance]]\nname = \"c\"\nspec = \"cycle:30\"\nkind = \"distance\"\nr = 2\n",
    )
    .unwrap();
    let (code, r) = json_report(
        p,
        &[
            "bench",
            "--suite",
            "suite.toml",
            "--reps",
            "1",
            "--pairs",
            "100",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(r["instances"][0]["name"], "c");
    assert_eq!(r["instances"][0]["n"], 30);
}
