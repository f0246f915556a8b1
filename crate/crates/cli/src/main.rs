//! Command-line driver: synthetic data generation, inference,
//! evaluation, validation, training, scoring, the ablation ladder, and
//! graph closure.
//!
//! Human-readable tables go to stdout, JSON artifacts to files (or
//! stdout when no output path is given), diagnostics to stderr.
//! Exit codes: 0 success, 1 usage error, 2 validation or infeasibility,
//! 3 oracle mismatch.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use tempcausal_core::ablation::run_ablation;
use tempcausal_core::evaluation::{
    awareness_counts, causal_counts, closure, mcnemar, temporal_correctness, validate,
    AwarenessCounts, McnemarOutcome, MetricsReport, ViolationReport,
};
use tempcausal_core::inference::{
    build_model, solve_bruteforce, solve_exact, ConstraintConfig, Solution,
};
use tempcausal_core::model::{
    enumerate_pairs, parse_dataset, parse_document, parse_graph, parse_graph_lenient,
    serialize_dataset, serialize_graph, Document, PairId, ScoreSet,
};
use tempcausal_core::scoring::{
    causal_label_set, parse_training_set, temporal_label_set, train, PerceptronModel,
};
use tempcausal_core::synth::{gen_dataset, SynthConfig};

#[derive(Parser)]
#[command(
    name = "tempcausal",
    version,
    about = "Joint temporal-causal relation inference over event graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic gold-annotated documents.
    Gen {
        /// Synthetic config as inline JSON or a path to a JSON file.
        #[arg(long)]
        config: Option<String>,
        /// Number of documents (seeded consecutively).
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Base seed; overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Solve the joint inference problem for each input document.
    Infer {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Constraint config as inline JSON or a path (default: all
        /// constraint families on).
        #[arg(long)]
        config: Option<String>,
        /// Keep only score rows whose pair lies within this sentence
        /// window.
        #[arg(long)]
        window: Option<u32>,
        /// Cross-check small instances against brute force; exit 3 on
        /// mismatch.
        #[arg(long)]
        oracle: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Score predictions against gold annotations.
    Eval {
        /// Gold-annotated documents.
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Predictions (solution JSON, single or array).
        #[arg(long)]
        pred: PathBuf,
        /// Optional second prediction set for McNemar's test.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Constraint config used for violation counting.
        #[arg(long)]
        config: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check predictions against the enabled constraint families.
    Validate {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        config: Option<String>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Train an averaged perceptron on a feature-vector training set.
    Train {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// `temporal`, `causal`, or a comma-separated label list
        /// (default: distinct labels of the training set, sorted).
        #[arg(long)]
        labels: Option<String>,
        #[arg(long, default_value_t = 10)]
        epochs: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Produce soft-max distributions for feature vectors.
    Score {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Run the preset ladder and report per-step metrics.
    Ablate {
        /// Gold-annotated dataset; generated on the fly from --config,
        /// --count, and --seed when absent.
        #[arg(short = 'i', long)]
        input: Option<PathBuf>,
        #[arg(long)]
        config: Option<String>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Transitive closure of a relation graph.
    Closure {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct OracleMismatch {
    doc: String,
    exact: String,
    brute: String,
}

impl fmt::Display for OracleMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "oracle mismatch on document `{}`: exact solver found {}, brute force found {}",
            self.doc, self.exact, self.brute
        )
    }
}

impl std::error::Error for OracleMismatch {}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                std::process::exit(0);
            }
            eprintln!("{err}");
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(classify(&err));
        }
    }
}

fn classify(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<OracleMismatch>().is_some() {
        return 3;
    }
    if err.downcast_ref::<tempcausal_core::Error>().is_some() {
        return 2;
    }
    1
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen {
            config,
            count,
            seed,
            output,
        } => cmd_gen(config, count, seed, output),
        Command::Infer {
            input,
            config,
            window,
            oracle,
            output,
        } => cmd_infer(input, config, window, oracle, output),
        Command::Eval {
            input,
            pred,
            compare,
            config,
            output,
        } => cmd_eval(input, pred, compare, config, output),
        Command::Validate {
            input,
            pred,
            config,
            output,
        } => cmd_validate(input, pred, config, output),
        Command::Train {
            input,
            labels,
            epochs,
            seed,
            output,
        } => cmd_train(input, labels, epochs, seed, output),
        Command::Score {
            input,
            model,
            output,
        } => cmd_score(input, model, output),
        Command::Ablate {
            input,
            config,
            count,
            seed,
            output,
        } => cmd_ablate(input, config, count, seed, output),
        Command::Closure { input, output } => cmd_closure(input, output),
    }
}

// ---------------------------------------------------------------------------
// IO helpers
// ---------------------------------------------------------------------------

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&PathBuf>, json: &str) -> Result<()> {
    match output {
        Some(path) => {
            fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn config_bytes(arg: &str) -> Result<Vec<u8>> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.as_bytes().to_vec())
    } else {
        read_bytes(Path::new(arg))
    }
}

fn load_constraint_config(arg: Option<&String>) -> Result<ConstraintConfig> {
    match arg {
        None => Ok(ConstraintConfig::full()),
        Some(arg) => Ok(ConstraintConfig::from_json(&config_bytes(arg)?)?),
    }
}

fn load_synth_config(arg: Option<&String>) -> Result<SynthConfig> {
    match arg {
        None => Ok(SynthConfig::default()),
        Some(arg) => Ok(SynthConfig::from_json(&config_bytes(arg)?)?),
    }
}

/// Load either a dataset (JSON array) or a single document. Returns the
/// documents and whether the input was an array.
fn load_documents(path: &Path) -> Result<(Vec<Document>, bool)> {
    let bytes = read_bytes(path)?;
    let first = bytes.iter().find(|b| !b.is_ascii_whitespace());
    if first == Some(&b'[') {
        Ok((parse_dataset(&bytes)?, true))
    } else {
        Ok((vec![parse_document(&bytes)?], false))
    }
}

/// Load predictions: a solution object or an array of them.
fn load_solutions(path: &Path) -> Result<Vec<Solution>> {
    let bytes = read_bytes(path)?;
    let value: serde_json::Value =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|item| Ok(Solution::from_json(item.to_string().as_bytes())?))
            .collect(),
        other => Ok(vec![Solution::from_json(other.to_string().as_bytes())?]),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_gen(
    config: Option<String>,
    count: usize,
    seed: Option<u64>,
    output: Option<PathBuf>,
) -> Result<i32> {
    let mut cfg = load_synth_config(config.as_ref())?;
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let docs = gen_dataset(&cfg, count)?;
    emit(output.as_ref(), &serialize_dataset(&docs))?;
    eprintln!("generated {} document(s) from seed {}", docs.len(), cfg.seed);
    Ok(0)
}

/// Restrict score rows to pairs within the sentence window.
fn apply_window(doc: &Document, window: u32) -> Result<Document> {
    let allowed: BTreeSet<PairId> = enumerate_pairs(doc, Some(window))
        .into_iter()
        .map(|(pair, _)| pair)
        .collect();
    let scores = ScoreSet {
        temporal: doc
            .scores
            .temporal
            .iter()
            .filter(|(pair, _)| allowed.contains(*pair))
            .map(|(pair, dist)| (pair.clone(), *dist))
            .collect(),
        causal: doc
            .scores
            .causal
            .iter()
            .filter(|(pair, _)| allowed.contains(*pair))
            .map(|(pair, score)| (pair.clone(), *score))
            .collect(),
    };
    Ok(Document::new(
        doc.id.clone(),
        doc.nodes().to_vec(),
        scores,
        doc.gold.clone(),
        doc.rules.clone(),
    )?)
}

fn cmd_infer(
    input: PathBuf,
    config: Option<String>,
    window: Option<u32>,
    oracle: bool,
    output: Option<PathBuf>,
) -> Result<i32> {
    let cfg = load_constraint_config(config.as_ref())?;
    let (mut docs, was_array) = load_documents(&input)?;
    if let Some(w) = window {
        docs = docs
            .iter()
            .map(|d| apply_window(d, w))
            .collect::<Result<Vec<_>>>()?;
    }

    let results: Vec<Result<(Solution, Vec<String>)>> = docs
        .par_iter()
        .map(|doc| {
            let model = build_model(doc, &cfg)?;
            let diagnostics = model.diagnostics.clone();
            let exact = solve_exact(&model);
            if oracle && model.exactly_one_count() <= 10 {
                let brute = solve_bruteforce(&model);
                match (&exact, &brute) {
                    (Ok(e), Ok(b)) => {
                        if (e.objective - b.objective).abs() > 1e-9 {
                            return Err(anyhow!(OracleMismatch {
                                doc: doc.id.clone(),
                                exact: format!("objective {}", e.objective),
                                brute: format!("objective {}", b.objective),
                            }));
                        }
                    }
                    (Err(_), Err(_)) => {}
                    (e, b) => {
                        return Err(anyhow!(OracleMismatch {
                            doc: doc.id.clone(),
                            exact: outcome_name(e),
                            brute: outcome_name(b),
                        }));
                    }
                }
            }
            Ok((exact?, diagnostics))
        })
        .collect();

    let mut solutions = Vec::new();
    for result in results {
        let (solution, diagnostics) = result?;
        for d in diagnostics {
            eprintln!("note: {d}");
        }
        solutions.push(solution);
    }

    let json = if was_array {
        let parts: Vec<serde_json::Value> = solutions
            .iter()
            .map(|s| serde_json::from_str(&s.to_json()).expect("valid JSON"))
            .collect();
        serde_json::to_string_pretty(&parts).expect("valid JSON")
    } else {
        solutions[0].to_json()
    };
    emit(output.as_ref(), &json)?;
    for s in &solutions {
        eprintln!(
            "{}: objective {:.6}, {} nodes expanded, {} ms",
            s.doc_id, s.objective, s.stats.nodes_expanded, s.stats.ms
        );
    }
    Ok(0)
}

fn outcome_name<T>(r: &std::result::Result<Solution, T>) -> String {
    match r {
        Ok(s) => format!("objective {}", s.objective),
        Err(_) => "infeasible".to_string(),
    }
}

fn pair_up<'d, 's>(
    docs: &'d [Document],
    solutions: &'s [Solution],
) -> Result<Vec<(&'d Document, &'s Solution)>> {
    docs.iter()
        .map(|doc| {
            let solution = solutions
                .iter()
                .find(|s| s.doc_id == doc.id)
                .ok_or_else(|| anyhow!("no prediction found for document `{}`", doc.id))?;
            Ok((doc, solution))
        })
        .collect()
}

fn cmd_eval(
    input: PathBuf,
    pred: PathBuf,
    compare: Option<PathBuf>,
    config: Option<String>,
    output: Option<PathBuf>,
) -> Result<i32> {
    let cfg = load_constraint_config(config.as_ref())?;
    let (docs, _) = load_documents(&input)?;
    let solutions = load_solutions(&pred)?;
    let pairs = pair_up(&docs, &solutions)?;

    let mut counts = AwarenessCounts::default();
    let (mut causal_correct, mut causal_total) = (0usize, 0usize);
    let mut violations = 0usize;
    let mut correctness = Vec::new();
    for (doc, solution) in &pairs {
        let gold = doc
            .gold
            .as_ref()
            .ok_or(tempcausal_core::Error::MissingGold)?;
        let sys = solution.to_graph();
        counts.add(awareness_counts(gold, &sys));
        let (c, t) = causal_counts(gold, &sys);
        causal_correct += c;
        causal_total += t;
        violations += validate(&sys, doc, &cfg).len();
        correctness.extend(temporal_correctness(gold, &sys));
    }

    let mcnemar_outcome = match compare {
        None => None,
        Some(path) => {
            let other = load_solutions(&path)?;
            let other_pairs = pair_up(&docs, &other)?;
            let mut other_correct = Vec::new();
            for (doc, solution) in &other_pairs {
                let gold = doc.gold.as_ref().unwrap();
                other_correct.extend(temporal_correctness(gold, &solution.to_graph()));
            }
            let (stat, p) = mcnemar(&correctness, &other_correct)?;
            Some(McnemarOutcome { stat, p })
        }
    };

    let report = MetricsReport {
        temporal: counts.into(),
        causal_accuracy: if causal_total > 0 {
            Some(causal_correct as f64 / causal_total as f64)
        } else {
            None
        },
        violations,
        mcnemar: mcnemar_outcome,
        counts: counts.into(),
    };
    print!("{}", report.table());
    if output.is_some() {
        emit(output.as_ref(), &report.to_json())?;
    }
    Ok(0)
}

fn cmd_validate(
    input: PathBuf,
    pred: PathBuf,
    config: Option<String>,
    output: Option<PathBuf>,
) -> Result<i32> {
    let cfg = load_constraint_config(config.as_ref())?;
    let (docs, _) = load_documents(&input)?;

    // Predictions load leniently so oriented contradictions surface as
    // symmetry violations rather than hard errors.
    let bytes = read_bytes(&pred)?;
    let value: serde_json::Value = serde_json::from_slice(&bytes)?;
    let graphs: Vec<(tempcausal_core::model::RelationGraph, Option<String>)> = match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|v| Ok(parse_graph_lenient(v.to_string().as_bytes())?))
            .collect::<Result<Vec<_>>>()?,
        other => vec![parse_graph_lenient(other.to_string().as_bytes())?],
    };

    let mut total = 0usize;
    let mut reports: Vec<(String, ViolationReport)> = Vec::new();
    for (graph, doc_id) in &graphs {
        let doc = match doc_id {
            Some(id) => docs
                .iter()
                .find(|d| &d.id == id)
                .ok_or_else(|| anyhow!("prediction references unknown document `{id}`"))?,
            None if docs.len() == 1 => &docs[0],
            None => {
                return Err(anyhow!(
                    "prediction carries no document id and the input has several documents"
                ))
            }
        };
        let report = validate(graph, doc, &cfg);
        total += report.len();
        for v in &report.violations {
            println!("{}: [{:?}] {}", doc.id, v.kind, v.detail);
        }
        reports.push((doc.id.clone(), report));
    }
    if total == 0 {
        println!("no violations");
    } else {
        println!("{total} violation(s)");
    }
    if output.is_some() {
        let json = serde_json::to_string_pretty(
            &reports
                .iter()
                .map(|(id, r)| serde_json::json!({"document": id, "violations": r.violations}))
                .collect::<Vec<_>>(),
        )?;
        emit(output.as_ref(), &json)?;
    }
    Ok(if total == 0 { 0 } else { 2 })
}

fn cmd_train(
    input: PathBuf,
    labels: Option<String>,
    epochs: u32,
    seed: u64,
    output: Option<PathBuf>,
) -> Result<i32> {
    let data = parse_training_set(&read_bytes(&input)?)?;
    let labels = match labels.as_deref() {
        Some("temporal") => temporal_label_set(),
        Some("causal") => causal_label_set(),
        Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
        None => {
            let mut set: Vec<String> = data.iter().map(|ex| ex.label.clone()).collect();
            set.sort();
            set.dedup();
            set
        }
    };
    let model = train(&data, labels, epochs, seed)?;
    let accuracy = tempcausal_core::scoring::accuracy(&model, &data);
    emit(output.as_ref(), &model.to_json())?;
    eprintln!(
        "trained on {} examples, {} labels, {} epochs; training accuracy {:.4}",
        data.len(),
        model.labels().len(),
        epochs,
        accuracy
    );
    Ok(0)
}

fn cmd_score(input: PathBuf, model: PathBuf, output: Option<PathBuf>) -> Result<i32> {
    #[derive(serde::Deserialize)]
    struct Row {
        features: tempcausal_core::scoring::FeatureVector,
    }
    let rows: Vec<Row> = serde_json::from_slice(&read_bytes(&input)?)
        .with_context(|| format!("parsing {}", input.display()))?;
    let model = PerceptronModel::from_json(&read_bytes(&model)?)?;
    let out: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "dist": model.score_map(&row.features),
                "label": model.predict(&row.features),
            })
        })
        .collect();
    emit(output.as_ref(), &serde_json::to_string_pretty(&out)?)?;
    Ok(0)
}

fn cmd_ablate(
    input: Option<PathBuf>,
    config: Option<String>,
    count: usize,
    seed: Option<u64>,
    output: Option<PathBuf>,
) -> Result<i32> {
    let docs = match input {
        Some(path) => load_documents(&path)?.0,
        None => {
            let mut cfg = load_synth_config(config.as_ref())?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            eprintln!("generating {count} synthetic document(s) from seed {}", cfg.seed);
            gen_dataset(&cfg, count)?
        }
    };
    let report = run_ablation(&docs)?;
    print!("{}", report.table());
    if output.is_some() {
        emit(output.as_ref(), &report.to_json())?;
    }
    Ok(0)
}

fn cmd_closure(input: PathBuf, output: Option<PathBuf>) -> Result<i32> {
    let graph = parse_graph(&read_bytes(&input)?)?;
    let closed = closure(&graph)?;
    emit(output.as_ref(), &serialize_graph(&closed))?;
    eprintln!(
        "closure added {} edge(s)",
        closed.temporal_len() - graph.temporal_len()
    );
    Ok(0)
}
