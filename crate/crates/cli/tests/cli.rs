//! End-to-end exercises of the command-line surface: every subcommand,
//! the window filter, and the documented exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tempcausal")
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("tempcausal-cli-tests").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pipeline_gen_infer_eval_validate() {
    let dir = workdir("pipeline");
    let data = dir.join("data.json");
    let sols = dir.join("sols.json");
    let metrics = dir.join("metrics.json");

    let out = run(&[
        "gen",
        "--config",
        r#"{"n_events":4,"n_timexes":1,"causal_density":0.4,"noise":0.4,"vague_rate":0.1,"seed":5}"#,
        "--count",
        "3",
        "-o",
        path_str(&data),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&["infer", "-i", path_str(&data), "-o", path_str(&sols)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&[
        "eval",
        "-i",
        path_str(&data),
        "--pred",
        path_str(&sols),
        "-o",
        path_str(&metrics),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("temporal awareness"), "{stdout}");
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&metrics).unwrap()).unwrap();
    assert!(report["temporal"]["f1"].as_f64().unwrap() >= 0.0);
    assert_eq!(report["violations"].as_u64().unwrap(), 0);

    // Inference output satisfies the constraints it ran with.
    let out = run(&["validate", "-i", path_str(&data), "--pred", path_str(&sols)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("no violations"));
}

#[test]
fn oracle_flag_and_window() {
    let dir = workdir("window");
    let data = dir.join("data.json");
    let full = dir.join("full.json");
    let narrow = dir.join("narrow.json");

    let status = run(&[
        "gen",
        "--config",
        r#"{"n_events":3,"n_timexes":1,"causal_density":0.3,"noise":0.5,"vague_rate":0.0,"seed":9}"#,
        "-o",
        path_str(&data),
    ]);
    assert!(status.status.success());

    let out = run(&["infer", "-i", path_str(&data), "--oracle", "-o", path_str(&full)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&[
        "infer",
        "-i",
        path_str(&data),
        "--window",
        "0",
        "-o",
        path_str(&narrow),
    ]);
    assert!(out.status.success());

    let count = |p: &PathBuf| {
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap();
        v[0]["temporal"].as_array().unwrap().len()
    };
    assert!(count(&narrow) <= count(&full));
}

#[test]
fn exit_codes() {
    let dir = workdir("exit-codes");

    // Usage error: unknown subcommand.
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));

    // Missing input file: usage-level failure.
    let out = run(&["infer", "-i", path_str(&dir.join("missing.json"))]);
    assert_eq!(out.status.code(), Some(1));

    // Schema violation: validation failure.
    let bad = dir.join("bad.json");
    std::fs::write(&bad, br#"{"id": "d", "nodes": [], "scores": {"temporal": [{"pair": ["a","b"], "dist": {"b": 1.0}}]}}"#).unwrap();
    let out = run(&["infer", "-i", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // Infeasible pins: validation failure.
    let infeasible = dir.join("infeasible.json");
    std::fs::write(
        &infeasible,
        br#"{
            "id": "d",
            "nodes": [
                {"id": "A", "kind": "event"},
                {"id": "B", "kind": "event"},
                {"id": "C", "kind": "event"}
            ],
            "scores": {"temporal": [], "causal": []},
            "rules": [
                {"pair": ["A", "B"], "label": "b"},
                {"pair": ["B", "C"], "label": "s"},
                {"pair": ["A", "C"], "label": "a"}
            ]
        }"#,
    )
    .unwrap();
    let out = run(&["infer", "-i", path_str(&infeasible)]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // A prediction that breaks a constraint: validate exits 2 and
    // reports the family.
    let doc = dir.join("doc.json");
    std::fs::write(
        &doc,
        br#"{
            "id": "d",
            "nodes": [
                {"id": "A", "kind": "event"},
                {"id": "B", "kind": "event"},
                {"id": "C", "kind": "event"}
            ],
            "scores": {"temporal": [], "causal": []}
        }"#,
    )
    .unwrap();
    let pred = dir.join("pred.json");
    std::fs::write(
        &pred,
        br#"{
            "document": "d",
            "objective": 0.0,
            "temporal": [
                {"pair": ["A", "B"], "label": "b"},
                {"pair": ["B", "C"], "label": "s"},
                {"pair": ["A", "C"], "label": "a"}
            ],
            "causal": [],
            "stats": {"nodes_expanded": 0, "ms": 0}
        }"#,
    )
    .unwrap();
    let out = run(&["validate", "-i", path_str(&doc), "--pred", path_str(&pred)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Transitivity"));
}

#[test]
fn train_and_score() {
    let dir = workdir("train");
    let trainset = dir.join("train.json");
    let model = dir.join("model.json");
    let features = dir.join("features.json");
    let dists = dir.join("dists.json");

    std::fs::write(
        &trainset,
        br#"[
            {"features": {"x": 1.0, "bias": 1.0}, "label": "pos"},
            {"features": {"x": -1.0, "bias": 1.0}, "label": "neg"}
        ]"#,
    )
    .unwrap();
    let out = run(&[
        "train",
        "-i",
        path_str(&trainset),
        "--epochs",
        "10",
        "--seed",
        "3",
        "-o",
        path_str(&model),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    std::fs::write(&features, br#"[{"features": {"x": 3.0, "bias": 1.0}}]"#).unwrap();
    let out = run(&[
        "score",
        "-i",
        path_str(&features),
        "--model",
        path_str(&model),
        "-o",
        path_str(&dists),
    ]);
    assert!(out.status.success());
    let scored: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&dists).unwrap()).unwrap();
    assert_eq!(scored[0]["label"], "pos");
    let dist = scored[0]["dist"].as_object().unwrap();
    let total: f64 = dist.values().map(|v| v.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn closure_conflict_exits_2() {
    let dir = workdir("closure");
    let graph = dir.join("graph.json");
    std::fs::write(
        &graph,
        br#"{
            "temporal": [
                {"pair": ["A", "B"], "label": "b"},
                {"pair": ["B", "C"], "label": "b"},
                {"pair": ["A", "C"], "label": "a"}
            ],
            "causal": []
        }"#,
    )
    .unwrap();
    let out = run(&["closure", "-i", path_str(&graph)]);
    assert_eq!(out.status.code(), Some(2));

    let ok = dir.join("ok.json");
    std::fs::write(
        &ok,
        br#"{"temporal": [{"pair": ["A","B"], "label": "b"}, {"pair": ["B","C"], "label": "b"}], "causal": []}"#,
    )
    .unwrap();
    let out = run(&["closure", "-i", path_str(&ok)]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"A\""), "{stdout}");
}
