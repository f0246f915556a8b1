//! Python bindings: the document model, exact joint inference, the
//! evaluation toolkit, perceptron scoring, and synthetic data
//! generation, exposed as the `tempcausal` extension module.

use std::collections::BTreeMap;
use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tempcausal_core::ablation;
use tempcausal_core::algebra::{
    reduce_allen, trans, AllenRel, CausalRel, TemporalRel, ALLEN_RELATIONS,
};
use tempcausal_core::evaluation;
use tempcausal_core::inference::{self, ConstraintConfig};
use tempcausal_core::model::{self, RelationGraph};
use tempcausal_core::scoring;
use tempcausal_core::synth;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

/// A parsed, validated document.
#[pyclass(frozen)]
struct Document {
    inner: model::Document,
}

#[pymethods]
impl Document {
    /// Parse a document from its JSON representation.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Document {
            inner: model::parse_document(text.as_bytes()).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        model::serialize_document(&self.inner)
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    fn node_ids(&self) -> Vec<String> {
        self.inner.nodes().iter().map(|n| n.id.clone()).collect()
    }

    fn gold_temporal<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        match &self.inner.gold {
            Some(gold) => temporal_edges_dict(py, gold),
            None => Ok(PyDict::new(py)),
        }
    }

    fn gold_causal<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        match &self.inner.gold {
            Some(gold) => causal_edges_dict(py, gold),
            None => Ok(PyDict::new(py)),
        }
    }

    /// Scored pair count as (temporal, causal).
    fn score_counts(&self) -> (usize, usize) {
        (
            self.inner.scores.temporal.len(),
            self.inner.scores.causal.len(),
        )
    }

    fn __repr__(&self) -> String {
        format!(
            "Document(id={:?}, nodes={}, temporal_scores={}, causal_scores={})",
            self.inner.id,
            self.inner.nodes().len(),
            self.inner.scores.temporal.len(),
            self.inner.scores.causal.len()
        )
    }
}

fn temporal_edges_dict<'py>(py: Python<'py>, graph: &RelationGraph) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (pair, label) in graph.temporal_edges() {
        d.set_item((pair.source(), pair.target()), label.as_str())?;
    }
    Ok(d)
}

fn causal_edges_dict<'py>(py: Python<'py>, graph: &RelationGraph) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (pair, label) in graph.causal_edges() {
        d.set_item((pair.source(), pair.target()), label.as_str())?;
    }
    Ok(d)
}

fn graph_from_dicts(
    temporal: Option<&Bound<'_, PyDict>>,
    causal: Option<&Bound<'_, PyDict>>,
) -> PyResult<RelationGraph> {
    let mut graph = RelationGraph::new();
    if let Some(edges) = temporal {
        for (key, value) in edges.iter() {
            let (a, b): (String, String) = key.extract()?;
            let label = TemporalRel::from_str(&value.extract::<String>()?).map_err(err)?;
            graph.set_temporal(&a, &b, label).map_err(err)?;
        }
    }
    if let Some(edges) = causal {
        for (key, value) in edges.iter() {
            let (a, b): (String, String) = key.extract()?;
            let label = CausalRel::from_str(&value.extract::<String>()?).map_err(err)?;
            graph.set_causal(&a, &b, label).map_err(err)?;
        }
    }
    Ok(graph)
}

// ---------------------------------------------------------------------------
// Inference
// ---------------------------------------------------------------------------

/// A solved label assignment.
#[pyclass(frozen)]
struct Solution {
    inner: inference::Solution,
}

#[pymethods]
impl Solution {
    #[getter]
    fn document(&self) -> String {
        self.inner.doc_id.clone()
    }

    #[getter]
    fn objective(&self) -> f64 {
        self.inner.objective
    }

    #[getter]
    fn nodes_expanded(&self) -> u64 {
        self.inner.stats.nodes_expanded
    }

    fn temporal<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (pair, label) in &self.inner.temporal {
            d.set_item((pair.source(), pair.target()), label.as_str())?;
        }
        Ok(d)
    }

    fn causal<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (pair, label) in &self.inner.causal {
            d.set_item((pair.source(), pair.target()), label.as_str())?;
        }
        Ok(d)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn __repr__(&self) -> String {
        format!(
            "Solution(document={:?}, objective={:.6}, temporal={}, causal={})",
            self.inner.doc_id,
            self.inner.objective,
            self.inner.temporal.len(),
            self.inner.causal.len()
        )
    }
}

/// Constraint families from a dict of booleans (missing keys default to
/// off); `None` enables every family without gold enforcement.
fn config_from_py(config: Option<&Bound<'_, PyDict>>) -> PyResult<ConstraintConfig> {
    let Some(d) = config else {
        return Ok(ConstraintConfig::full());
    };
    let mut cfg = ConstraintConfig::default();
    for (key, value) in d.iter() {
        let key: String = key.extract()?;
        let flag: bool = value.extract()?;
        match key.as_str() {
            "symmetry" => cfg.symmetry = flag,
            "transitivity" => cfg.transitivity = flag,
            "tt" => cfg.tt = flag,
            "rules" => cfg.rules = flag,
            "causal_link" => cfg.causal_link = flag,
            "enforce_gold_temporal" => cfg.enforce_gold_temporal = flag,
            "enforce_gold_causal" => cfg.enforce_gold_causal = flag,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown constraint flag `{other}`"
                )))
            }
        }
    }
    Ok(cfg)
}

/// Solve the joint problem exactly. `config` is a dict of constraint
/// flags (default: all families on). With `oracle=True`, small instances
/// are cross-checked against brute force.
#[pyfunction]
#[pyo3(signature = (doc, config=None, oracle=false))]
fn infer(doc: &Document, config: Option<&Bound<'_, PyDict>>, oracle: bool) -> PyResult<Solution> {
    let cfg = config_from_py(config)?;
    let model = inference::build_model(&doc.inner, &cfg).map_err(err)?;
    let solution = inference::solve_exact(&model).map_err(err)?;
    if oracle && model.exactly_one_count() <= 10 {
        let brute = inference::solve_bruteforce(&model).map_err(err)?;
        if (brute.objective - solution.objective).abs() > 1e-9 {
            return Err(PyValueError::new_err(format!(
                "oracle mismatch: exact {} vs brute force {}",
                solution.objective, brute.objective
            )));
        }
    }
    Ok(Solution { inner: solution })
}

/// Per-pair argmax baseline, ignoring all constraints.
#[pyfunction]
fn solve_local(doc: &Document) -> Solution {
    Solution {
        inner: inference::solve_local(&doc.inner),
    }
}

/// Exhaustive oracle for small instances.
#[pyfunction]
#[pyo3(signature = (doc, config=None))]
fn solve_bruteforce(doc: &Document, config: Option<&Bound<'_, PyDict>>) -> PyResult<Solution> {
    let cfg = config_from_py(config)?;
    let model = inference::build_model(&doc.inner, &cfg).map_err(err)?;
    Ok(Solution {
        inner: inference::solve_bruteforce(&model).map_err(err)?,
    })
}

/// Check a solution against the enabled constraint families; returns one
/// dict per violation.
#[pyfunction]
#[pyo3(signature = (doc, solution, config=None))]
fn validate<'py>(
    py: Python<'py>,
    doc: &Document,
    solution: &Solution,
    config: Option<&Bound<'py, PyDict>>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = config_from_py(config)?;
    let report = evaluation::validate(&solution.inner.to_graph(), &doc.inner, &cfg);
    report
        .violations
        .iter()
        .map(|v| {
            let d = PyDict::new(py);
            d.set_item("kind", format!("{:?}", v.kind))?;
            d.set_item("pairs", v.pairs.clone())?;
            d.set_item("labels", v.labels.clone())?;
            d.set_item("detail", v.detail.clone())?;
            Ok(d)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Closure-based precision, recall, and F1 of a system temporal graph
/// against gold; both are dicts mapping (source, target) to a label.
#[pyfunction]
fn temporal_awareness(
    gold: &Bound<'_, PyDict>,
    sys: &Bound<'_, PyDict>,
) -> PyResult<(f64, f64, f64)> {
    let gold = graph_from_dicts(Some(gold), None)?;
    let sys = graph_from_dicts(Some(sys), None)?;
    Ok(evaluation::temporal_awareness(&gold, &sys))
}

/// Direction accuracy over gold causal pairs.
#[pyfunction]
fn causal_accuracy(gold: &Bound<'_, PyDict>, sys: &Bound<'_, PyDict>) -> PyResult<f64> {
    let gold = graph_from_dicts(None, Some(gold))?;
    let sys = graph_from_dicts(None, Some(sys))?;
    evaluation::causal_accuracy(&gold, &sys).map_err(err)
}

/// Transitive closure of a temporal edge dict.
#[pyfunction]
fn closure<'py>(py: Python<'py>, temporal: &Bound<'py, PyDict>) -> PyResult<Bound<'py, PyDict>> {
    let graph = graph_from_dicts(Some(temporal), None)?;
    let closed = evaluation::closure(&graph).map_err(err)?;
    temporal_edges_dict(py, &closed)
}

/// McNemar's test with continuity correction; returns (statistic, p).
#[pyfunction]
fn mcnemar(preds1: Vec<bool>, preds2: Vec<bool>) -> PyResult<(f64, f64)> {
    evaluation::mcnemar(&preds1, &preds2).map_err(err)
}

// ---------------------------------------------------------------------------
// Synthetic data and ablation
// ---------------------------------------------------------------------------

#[pyfunction]
#[pyo3(signature = (n_events=6, n_timexes=2, causal_density=0.3, noise=0.5, vague_rate=0.1,
                    seed=0, reversed_causal_rate=0.0, rule_rate=0.1, causal_scale=0.5))]
#[allow(clippy::too_many_arguments)]
fn gen_synthetic(
    n_events: usize,
    n_timexes: usize,
    causal_density: f64,
    noise: f64,
    vague_rate: f64,
    seed: u64,
    reversed_causal_rate: f64,
    rule_rate: f64,
    causal_scale: f64,
) -> PyResult<Document> {
    let cfg = synth::SynthConfig {
        n_events,
        n_timexes,
        causal_density,
        noise,
        vague_rate,
        seed,
        reversed_causal_rate,
        rule_rate,
        causal_scale,
    };
    Ok(Document {
        inner: synth::gen_synthetic(&cfg).map_err(err)?,
    })
}

/// Run the preset ladder over gold-annotated documents; returns the
/// report as a JSON string.
#[pyfunction]
fn run_ablation(docs: Vec<PyRef<'_, Document>>) -> PyResult<String> {
    let docs: Vec<model::Document> = docs.iter().map(|d| d.inner.clone()).collect();
    Ok(ablation::run_ablation(&docs).map_err(err)?.to_json())
}

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

/// A trained averaged perceptron.
#[pyclass(frozen)]
struct PerceptronModel {
    inner: scoring::PerceptronModel,
}

#[pymethods]
impl PerceptronModel {
    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    /// Soft-max distribution over the model's labels.
    fn score(&self, features: BTreeMap<String, f64>) -> BTreeMap<String, f64> {
        self.inner.score_map(&scoring::FeatureVector(features))
    }

    fn predict(&self, features: BTreeMap<String, f64>) -> String {
        self.inner
            .predict(&scoring::FeatureVector(features))
            .to_string()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PerceptronModel {
            inner: scoring::PerceptronModel::from_json(text.as_bytes()).map_err(err)?,
        })
    }
}

/// Train a multi-class averaged perceptron on (features, label) pairs.
#[pyfunction]
#[pyo3(signature = (examples, labels, epochs=10, seed=0))]
fn train_perceptron(
    examples: Vec<(BTreeMap<String, f64>, String)>,
    labels: Vec<String>,
    epochs: u32,
    seed: u64,
) -> PyResult<PerceptronModel> {
    let data: Vec<scoring::Example> = examples
        .into_iter()
        .map(|(features, label)| scoring::Example {
            features: scoring::FeatureVector(features),
            label,
        })
        .collect();
    Ok(PerceptronModel {
        inner: scoring::train(&data, labels, epochs, seed).map_err(err)?,
    })
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

#[pyfunction]
fn reverse_temporal(label: &str) -> PyResult<String> {
    Ok(TemporalRel::from_str(label)
        .map_err(err)?
        .reverse()
        .as_str()
        .to_string())
}

#[pyfunction]
fn reverse_causal(label: &str) -> PyResult<String> {
    Ok(CausalRel::from_str(label)
        .map_err(err)?
        .reverse()
        .as_str()
        .to_string())
}

/// Admissible labels for (m1, m3) given (m1, m2) = r1 and (m2, m3) = r2.
#[pyfunction]
#[pyo3(name = "trans")]
fn trans_py(r1: &str, r2: &str) -> PyResult<Vec<String>> {
    let r1 = TemporalRel::from_str(r1).map_err(err)?;
    let r2 = TemporalRel::from_str(r2).map_err(err)?;
    Ok(trans(r1, r2).iter().map(|r| r.as_str().to_string()).collect())
}

#[pyfunction]
fn is_consistent_triple(r1: &str, r2: &str, r3: &str) -> PyResult<bool> {
    let r1 = TemporalRel::from_str(r1).map_err(err)?;
    let r2 = TemporalRel::from_str(r2).map_err(err)?;
    let r3 = TemporalRel::from_str(r3).map_err(err)?;
    Ok(tempcausal_core::algebra::is_consistent_triple(r1, r2, r3))
}

fn allen_by_name(name: &str) -> PyResult<AllenRel> {
    let names = [
        "before",
        "meets",
        "overlaps",
        "starts",
        "during",
        "finishes",
        "equal",
        "after",
        "met-by",
        "overlapped-by",
        "started-by",
        "contains",
        "finished-by",
    ];
    names
        .iter()
        .position(|n| *n == name)
        .map(|i| ALLEN_RELATIONS[i])
        .ok_or_else(|| PyValueError::new_err(format!("unknown interval relation `{name}`")))
}

/// Reduce one of the thirteen interval relations to the six-label set.
#[pyfunction]
#[pyo3(name = "reduce_allen")]
fn reduce_allen_py(name: &str) -> PyResult<String> {
    Ok(reduce_allen(allen_by_name(name)?).as_str().to_string())
}

/// Reduced relation between two normalized timex values, or None if
/// either does not parse.
#[pyfunction]
fn compare_timex_values(v1: &str, v2: &str) -> Option<String> {
    let (s1, e1) = model::parse_timex_interval(v1)?;
    let (s2, e2) = model::parse_timex_interval(v2)?;
    Some(
        tempcausal_core::algebra::interval_relation(s1, e1, s2, e2)
            .as_str()
            .to_string(),
    )
}

#[pymodule]
fn tempcausal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Document>()?;
    m.add_class::<Solution>()?;
    m.add_class::<PerceptronModel>()?;
    m.add_function(wrap_pyfunction!(infer, m)?)?;
    m.add_function(wrap_pyfunction!(solve_local, m)?)?;
    m.add_function(wrap_pyfunction!(solve_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(temporal_awareness, m)?)?;
    m.add_function(wrap_pyfunction!(causal_accuracy, m)?)?;
    m.add_function(wrap_pyfunction!(closure, m)?)?;
    m.add_function(wrap_pyfunction!(mcnemar, m)?)?;
    m.add_function(wrap_pyfunction!(gen_synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(run_ablation, m)?)?;
    m.add_function(wrap_pyfunction!(train_perceptron, m)?)?;
    m.add_function(wrap_pyfunction!(reverse_temporal, m)?)?;
    m.add_function(wrap_pyfunction!(reverse_causal, m)?)?;
    m.add_function(wrap_pyfunction!(trans_py, m)?)?;
    m.add_function(wrap_pyfunction!(is_consistent_triple, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_allen_py, m)?)?;
    m.add_function(wrap_pyfunction!(compare_timex_values, m)?)?;
    Ok(())
}
