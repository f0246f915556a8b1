//! Graph closure, constraint validation, the closure-based
//! precision/recall metric for temporal graphs, causal direction
//! accuracy, and McNemar's paired significance test.

use serde::Serialize;

use crate::algebra::{trans, CausalRel, TemporalRel};
use crate::error::{Error, Result};
use crate::inference::ConstraintConfig;
use crate::model::{compare_timex, Document, NodeKind, RelationGraph};

/// Transitive closure: repeatedly add, for every path
/// `(m1, m2) = r1`, `(m2, m3) = r2` with both labels non-vague and a
/// singleton `Trans(r1, r2) = {r3}`, the edge `(m1, m3) = r3` when that
/// pair is unlabeled. Existing labels are never overwritten; a derived
/// singleton contradicting an existing non-vague label is a conflict.
pub fn closure(graph: &RelationGraph) -> Result<RelationGraph> {
    closure_inner(graph, true)
}

/// As [`closure`], but contradictions keep the existing label instead of
/// failing. Used by metrics, which must be defined for any input.
pub fn closure_lenient(graph: &RelationGraph) -> RelationGraph {
    closure_inner(graph, false).expect("lenient closure cannot fail")
}

fn closure_inner(graph: &RelationGraph, strict: bool) -> Result<RelationGraph> {
    let mut out = graph.clone();
    let nodes = graph.temporal_nodes();
    loop {
        let mut added = false;
        for x in &nodes {
            for y in &nodes {
                if x == y {
                    continue;
                }
                let Some(r1) = out.temporal(x, y) else { continue };
                if r1 == TemporalRel::Vague {
                    continue;
                }
                for z in &nodes {
                    if z == x || z == y || x >= z {
                        continue;
                    }
                    let Some(r2) = out.temporal(y, z) else { continue };
                    if r2 == TemporalRel::Vague {
                        continue;
                    }
                    let Some(r3) = trans(r1, r2).as_singleton() else {
                        continue;
                    };
                    match out.temporal(x, z) {
                        None => {
                            out.set_temporal(x, z, r3)?;
                            added = true;
                        }
                        Some(existing)
                            if existing != r3 && existing != TemporalRel::Vague && strict =>
                        {
                            return Err(Error::ClosureConflict {
                                a: x.clone(),
                                b: z.clone(),
                                existing: existing.to_string(),
                                derived: r3.to_string(),
                                via: format!("({x}, {y}) = {r1}, ({y}, {z}) = {r2}"),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        if !added {
            return Ok(out);
        }
    }
}

/// Edge counts underlying the awareness metric, suitable for micro
/// aggregation across documents.
#[derive(Debug, Clone, Copy, Default)]
pub struct AwarenessCounts {
    /// Non-vague system edges.
    pub sys: usize,
    /// Non-vague system edges present with the same label in the closure
    /// of the gold graph.
    pub sys_matched: usize,
    /// Non-vague gold edges.
    pub gold: usize,
    /// Non-vague gold edges present with the same label in the closure
    /// of the system graph.
    pub gold_matched: usize,
}

impl AwarenessCounts {
    pub fn add(&mut self, other: AwarenessCounts) {
        self.sys += other.sys;
        self.sys_matched += other.sys_matched;
        self.gold += other.gold;
        self.gold_matched += other.gold_matched;
    }

    pub fn precision(&self) -> f64 {
        ratio(self.sys_matched, self.sys)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.gold_matched, self.gold)
    }

    pub fn f1(&self) -> f64 {
        f1(self.precision(), self.recall())
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Count matches of each graph's non-vague edges against the closure of
/// the other. Vague edges participate in neither numerators nor
/// denominators; a non-vague system edge whose closure-of-gold label is
/// vague (or absent) counts as unmatched.
pub fn awareness_counts(gold: &RelationGraph, sys: &RelationGraph) -> AwarenessCounts {
    let gold_closed = closure_lenient(gold);
    let sys_closed = closure_lenient(sys);
    let mut counts = AwarenessCounts::default();
    for (pair, label) in sys.temporal_edges() {
        if label == TemporalRel::Vague {
            continue;
        }
        counts.sys += 1;
        if gold_closed.temporal(pair.source(), pair.target()) == Some(label) {
            counts.sys_matched += 1;
        }
    }
    for (pair, label) in gold.temporal_edges() {
        if label == TemporalRel::Vague {
            continue;
        }
        counts.gold += 1;
        if sys_closed.temporal(pair.source(), pair.target()) == Some(label) {
            counts.gold_matched += 1;
        }
    }
    counts
}

/// Closure-based precision, recall, and F1 of the system temporal graph
/// against gold. Empty denominators yield zero.
pub fn temporal_awareness(gold: &RelationGraph, sys: &RelationGraph) -> (f64, f64, f64) {
    let c = awareness_counts(gold, sys);
    (c.precision(), c.recall(), c.f1())
}

/// (correct, total) over gold causal pairs with a direction. A system
/// `null` or missing prediction counts as wrong.
pub fn causal_counts(gold: &RelationGraph, sys: &RelationGraph) -> (usize, usize) {
    let mut correct = 0;
    let mut total = 0;
    for (pair, label) in gold.causal_edges() {
        if label == CausalRel::Null {
            continue;
        }
        total += 1;
        if sys.causal(pair.source(), pair.target()) == Some(label) {
            correct += 1;
        }
    }
    (correct, total)
}

/// Direction accuracy over gold causal pairs.
pub fn causal_accuracy(gold: &RelationGraph, sys: &RelationGraph) -> Result<f64> {
    let (correct, total) = causal_counts(gold, sys);
    if total == 0 {
        return Err(Error::NoGoldCausalPairs);
    }
    Ok(correct as f64 / total as f64)
}

/// Per-edge correctness against gold non-vague temporal edges, in
/// canonical pair order. Aligned across systems evaluated on the same
/// gold.
pub fn temporal_correctness(gold: &RelationGraph, sys: &RelationGraph) -> Vec<bool> {
    gold.temporal_edges()
        .filter(|(_, label)| *label != TemporalRel::Vague)
        .map(|(pair, label)| sys.temporal(pair.source(), pair.target()) == Some(label))
        .collect()
}

/// Per-pair correctness against gold directed causal pairs, in canonical
/// pair order.
pub fn causal_correctness(gold: &RelationGraph, sys: &RelationGraph) -> Vec<bool> {
    gold.causal_edges()
        .filter(|(_, label)| *label != CausalRel::Null)
        .map(|(pair, label)| sys.causal(pair.source(), pair.target()) == Some(label))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Symmetry,
    Transitivity,
    CausalBridge,
    Pin,
}

/// One violated constraint instance.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub pairs: Vec<(String, String)>,
    pub labels: Vec<String>,
    pub detail: String,
}

/// All violations found in a graph, per enabled constraint family.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

/// Exhaustively check `graph` against every constraint family enabled in
/// `cfg`, in the context of `doc` (which supplies timex values, rules,
/// and gold for enforcement checks).
pub fn validate(graph: &RelationGraph, doc: &Document, cfg: &ConstraintConfig) -> ViolationReport {
    let mut report = ViolationReport::default();

    if cfg.symmetry {
        for conflict in graph.conflicts() {
            report.violations.push(Violation {
                kind: ViolationKind::Symmetry,
                pairs: vec![(
                    conflict.pair.source().to_string(),
                    conflict.pair.target().to_string(),
                )],
                labels: vec![conflict.first.clone(), conflict.second.clone()],
                detail: format!(
                    "{} entries disagree after orientation: {} vs {}",
                    conflict.family, conflict.first, conflict.second
                ),
            });
        }
    }

    if cfg.transitivity {
        let nodes = graph.temporal_nodes();
        let n = nodes.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    // One violation per node triple: the three orderings
                    // with a canonically oriented conclusion are checked
                    // and the first broken one reported.
                    let orderings = [
                        (&nodes[i], &nodes[j], &nodes[k]),
                        (&nodes[j], &nodes[i], &nodes[k]),
                        (&nodes[i], &nodes[k], &nodes[j]),
                    ];
                    for (x, y, z) in orderings {
                        let (Some(r1), Some(r2), Some(r3)) = (
                            graph.temporal(x, y),
                            graph.temporal(y, z),
                            graph.temporal(x, z),
                        ) else {
                            continue;
                        };
                        if !trans(r1, r2).contains(r3) {
                            report.violations.push(Violation {
                                kind: ViolationKind::Transitivity,
                                pairs: vec![
                                    (x.clone(), y.clone()),
                                    (y.clone(), z.clone()),
                                    (x.clone(), z.clone()),
                                ],
                                labels: vec![r1.to_string(), r2.to_string(), r3.to_string()],
                                detail: format!(
                                    "({x}, {z}) = {r3} not in Trans({r1}, {r2}) = {}",
                                    trans(r1, r2)
                                ),
                            });
                            break;
                        }
                    }
                }
            }
        }
    }

    if cfg.tt {
        let timexes: Vec<_> = doc
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Timex)
            .collect();
        for (i, t1) in timexes.iter().enumerate() {
            for t2 in timexes.iter().skip(i + 1) {
                let Some(expected) = compare_timex(t1, t2) else {
                    continue;
                };
                if let Some(actual) = graph.temporal(&t1.id, &t2.id) {
                    if actual != expected {
                        report.violations.push(Violation {
                            kind: ViolationKind::Pin,
                            pairs: vec![(t1.id.clone(), t2.id.clone())],
                            labels: vec![actual.to_string(), expected.to_string()],
                            detail: format!(
                                "timex pair ({}, {}) labeled {actual}, dates give {expected}",
                                t1.id, t2.id
                            ),
                        });
                    }
                }
            }
        }
    }

    if cfg.rules {
        if let Some(rules) = &doc.rules {
            for (pair, &expected) in rules {
                if let Some(actual) = graph.temporal(pair.source(), pair.target()) {
                    if actual != expected {
                        report.violations.push(Violation {
                            kind: ViolationKind::Pin,
                            pairs: vec![(pair.source().to_string(), pair.target().to_string())],
                            labels: vec![actual.to_string(), expected.to_string()],
                            detail: format!("rule pins {pair} to {expected}, labeled {actual}"),
                        });
                    }
                }
            }
        }
    }

    if cfg.enforce_gold_temporal || cfg.enforce_gold_causal {
        if let Some(gold) = &doc.gold {
            if cfg.enforce_gold_temporal {
                for (pair, expected) in gold.temporal_edges() {
                    if !cfg.covers_gold_temporal(pair) {
                        continue;
                    }
                    if let Some(actual) = graph.temporal(pair.source(), pair.target()) {
                        if actual != expected {
                            report.violations.push(Violation {
                                kind: ViolationKind::Pin,
                                pairs: vec![(pair.source().to_string(), pair.target().to_string())],
                                labels: vec![actual.to_string(), expected.to_string()],
                                detail: format!("gold pins {pair} to {expected}, labeled {actual}"),
                            });
                        }
                    }
                }
            }
            if cfg.enforce_gold_causal {
                for (pair, expected) in gold.causal_edges() {
                    if !cfg.covers_gold_causal(pair) {
                        continue;
                    }
                    if let Some(actual) = graph.causal(pair.source(), pair.target()) {
                        if actual != expected {
                            report.violations.push(Violation {
                                kind: ViolationKind::Pin,
                                pairs: vec![(pair.source().to_string(), pair.target().to_string())],
                                labels: vec![actual.to_string(), expected.to_string()],
                                detail: format!(
                                    "gold pins causal {pair} to {expected}, labeled {actual}"
                                ),
                            });
                        }
                    }
                }
            }
        }
    }

    if cfg.causal_link {
        for (pair, label) in graph.causal_edges() {
            let required = match label {
                CausalRel::Causes => TemporalRel::Before,
                CausalRel::CausedBy => TemporalRel::After,
                CausalRel::Null => continue,
            };
            let actual = graph.temporal(pair.source(), pair.target());
            if actual != Some(required) {
                report.violations.push(Violation {
                    kind: ViolationKind::CausalBridge,
                    pairs: vec![(pair.source().to_string(), pair.target().to_string())],
                    labels: vec![
                        label.to_string(),
                        actual.map_or("none".to_string(), |r| r.to_string()),
                    ],
                    detail: format!(
                        "causal {label} on {pair} requires temporal {required}, found {}",
                        actual.map_or("none".to_string(), |r| r.to_string())
                    ),
                });
            }
        }
    }

    report
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TemporalMetrics {
    pub p: f64,
    pub r: f64,
    pub f1: f64,
}

impl From<AwarenessCounts> for TemporalMetrics {
    fn from(c: AwarenessCounts) -> Self {
        TemporalMetrics {
            p: c.precision(),
            r: c.recall(),
            f1: c.f1(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McnemarOutcome {
    pub stat: f64,
    pub p: f64,
}

/// Aggregated evaluation of one system against gold.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub temporal: TemporalMetrics,
    pub causal_accuracy: Option<f64>,
    pub violations: usize,
    pub mcnemar: Option<McnemarOutcome>,
    pub counts: ReportCounts,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReportCounts {
    pub sys: usize,
    pub gold: usize,
    pub sys_matched: usize,
    pub gold_matched: usize,
}

impl From<AwarenessCounts> for ReportCounts {
    fn from(c: AwarenessCounts) -> Self {
        ReportCounts {
            sys: c.sys,
            gold: c.gold,
            sys_matched: c.sys_matched,
            gold_matched: c.gold_matched,
        }
    }
}

impl MetricsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Aligned human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<24}{:>8}{:>8}{:>8}\n",
            "", "P", "R", "F1"
        ));
        out.push_str(&format!(
            "{:<24}{:>8.3}{:>8.3}{:>8.3}\n",
            "temporal awareness", self.temporal.p, self.temporal.r, self.temporal.f1
        ));
        if let Some(acc) = self.causal_accuracy {
            out.push_str(&format!("{:<24}{:>8.3}\n", "causal accuracy", acc));
        }
        out.push_str(&format!("{:<24}{:>8}\n", "violations", self.violations));
        if let Some(m) = &self.mcnemar {
            out.push_str(&format!(
                "{:<24}{:>8.3}  (p = {:.4})\n",
                "mcnemar stat", m.stat, m.p
            ));
        }
        out
    }
}

/// McNemar's test with continuity correction over two aligned correctness
/// lists. Returns `(statistic, p)`; no discordant pairs yields `p = 1`.
pub fn mcnemar(preds1: &[bool], preds2: &[bool]) -> Result<(f64, f64)> {
    if preds1.len() != preds2.len() {
        return Err(Error::LengthMismatch {
            left: preds1.len(),
            right: preds2.len(),
        });
    }
    let mut b = 0u64;
    let mut c = 0u64;
    for (&x, &y) in preds1.iter().zip(preds2) {
        match (x, y) {
            (true, false) => b += 1,
            (false, true) => c += 1,
            _ => {}
        }
    }
    if b + c == 0 {
        return Ok((0.0, 1.0));
    }
    let diff = (b as f64 - c as f64).abs();
    let statistic = (diff - 1.0).powi(2) / (b + c) as f64;
    // Chi-square tail with one degree of freedom.
    let p = libm::erfc((statistic / 2.0).sqrt());
    Ok((statistic, p))
}
