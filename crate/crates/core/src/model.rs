//! Document data model: temporal nodes (events and time expressions),
//! canonical unordered pairs, per-pair score tables, gold and rule
//! annotations, and the JSON wire format.
//!
//! Everything is canonicalized on ingestion: the node with the
//! lexicographically smaller id is always the pair source, and labels or
//! score rows given in the opposite orientation are reversed to match.
//! Storing `r` for `(A, B)` and storing `r̄` for `(B, A)` are therefore
//! the same operation, and symmetry holds by construction downstream.

use std::collections::BTreeMap;
use std::fmt;

use chrono::{Duration, NaiveDate, NaiveDateTime, NaiveTime};
use serde::{Deserialize, Serialize};

use crate::algebra::{interval_relation, CausalRel, TemporalRel, TEMPORAL_LABELS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "event")]
    Event,
    #[serde(rename = "timex")]
    Timex,
}

/// A temporal node: an event mention or a time expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentence: Option<u32>,
    /// Normalized ISO-8601 value; timex nodes only. Supported forms:
    /// `YYYY`, `YYYY-MM`, `YYYY-MM-DD`, `YYYY-MM-DDThh:mm`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairCategory {
    EE,
    ET,
    TT,
}

impl fmt::Display for PairCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairCategory::EE => "EE",
            PairCategory::ET => "ET",
            PairCategory::TT => "TT",
        })
    }
}

/// Canonical unordered pair of node ids: `source < target`
/// lexicographically, always.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairId {
    source: String,
    target: String,
}

impl PairId {
    /// Canonicalize `(a, b)`. Returns the pair and whether the input was
    /// flipped; `None` if `a == b`.
    pub fn canonical(a: &str, b: &str) -> Option<(PairId, bool)> {
        match a.cmp(b) {
            std::cmp::Ordering::Less => Some((
                PairId {
                    source: a.to_string(),
                    target: b.to_string(),
                },
                false,
            )),
            std::cmp::Ordering::Greater => Some((
                PairId {
                    source: b.to_string(),
                    target: a.to_string(),
                },
                true,
            )),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn target(&self) -> &str {
        &self.target
    }
}

impl fmt::Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.source, self.target)
    }
}

/// Confidence scores for one causal pair, canonical orientation:
/// `c` is "source causes target".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalScore {
    pub c: f64,
    pub cbar: f64,
}

/// All score tables of a document, keyed by canonical pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreSet {
    /// Per-label scores indexed by `TemporalRel::index()`.
    pub temporal: BTreeMap<PairId, [f64; 6]>,
    /// Directed causal scores; event-event pairs only.
    pub causal: BTreeMap<PairId, CausalScore>,
}

/// A record of two input entries that disagreed about the same unordered
/// pair after orientation.
#[derive(Debug, Clone)]
pub struct EdgeConflict {
    pub pair: PairId,
    pub family: &'static str,
    pub first: String,
    pub second: String,
}

/// Labeled temporal and causal edges over canonical pairs.
#[derive(Debug, Clone, Default)]
pub struct RelationGraph {
    temporal: BTreeMap<PairId, TemporalRel>,
    causal: BTreeMap<PairId, CausalRel>,
    conflicts: Vec<EdgeConflict>,
}

impl PartialEq for RelationGraph {
    fn eq(&self, other: &Self) -> bool {
        self.temporal == other.temporal && self.causal == other.causal
    }
}

impl RelationGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert the temporal label for `(a, b)`; reversed orientations are
    /// normalized. A disagreement with an existing entry is an error.
    pub fn set_temporal(&mut self, a: &str, b: &str, label: TemporalRel) -> Result<()> {
        let (pair, flipped) = PairId::canonical(a, b).ok_or_else(|| Error::SelfPair {
            path: String::new(),
            id: a.to_string(),
        })?;
        let canonical = if flipped { label.reverse() } else { label };
        if let Some(&existing) = self.temporal.get(&pair) {
            if existing != canonical {
                return Err(Error::SymmetryConflict {
                    a: pair.source.clone(),
                    b: pair.target.clone(),
                    first: existing.to_string(),
                    second: canonical.to_string(),
                });
            }
        }
        self.temporal.insert(pair, canonical);
        Ok(())
    }

    /// As `set_temporal`, but a disagreement keeps the first label and
    /// records the conflict instead of failing.
    pub fn set_temporal_lenient(&mut self, a: &str, b: &str, label: TemporalRel) {
        let Some((pair, flipped)) = PairId::canonical(a, b) else {
            return;
        };
        let canonical = if flipped { label.reverse() } else { label };
        match self.temporal.get(&pair) {
            Some(&existing) if existing != canonical => {
                self.conflicts.push(EdgeConflict {
                    pair,
                    family: "temporal",
                    first: existing.to_string(),
                    second: canonical.to_string(),
                });
            }
            Some(_) => {}
            None => {
                self.temporal.insert(pair, canonical);
            }
        }
    }

    pub fn set_causal(&mut self, a: &str, b: &str, label: CausalRel) -> Result<()> {
        let (pair, flipped) = PairId::canonical(a, b).ok_or_else(|| Error::SelfPair {
            path: String::new(),
            id: a.to_string(),
        })?;
        let canonical = if flipped { label.reverse() } else { label };
        if let Some(&existing) = self.causal.get(&pair) {
            if existing != canonical {
                return Err(Error::SymmetryConflict {
                    a: pair.source.clone(),
                    b: pair.target.clone(),
                    first: existing.to_string(),
                    second: canonical.to_string(),
                });
            }
        }
        self.causal.insert(pair, canonical);
        Ok(())
    }

    pub fn set_causal_lenient(&mut self, a: &str, b: &str, label: CausalRel) {
        let Some((pair, flipped)) = PairId::canonical(a, b) else {
            return;
        };
        let canonical = if flipped { label.reverse() } else { label };
        match self.causal.get(&pair) {
            Some(&existing) if existing != canonical => {
                self.conflicts.push(EdgeConflict {
                    pair,
                    family: "causal",
                    first: existing.to_string(),
                    second: canonical.to_string(),
                });
            }
            Some(_) => {}
            None => {
                self.causal.insert(pair, canonical);
            }
        }
    }

    /// Temporal label of `(a, b)` in the queried orientation.
    pub fn temporal(&self, a: &str, b: &str) -> Option<TemporalRel> {
        let (pair, flipped) = PairId::canonical(a, b)?;
        self.temporal
            .get(&pair)
            .map(|&r| if flipped { r.reverse() } else { r })
    }

    /// Causal label of `(a, b)` in the queried orientation.
    pub fn causal(&self, a: &str, b: &str) -> Option<CausalRel> {
        let (pair, flipped) = PairId::canonical(a, b)?;
        self.causal
            .get(&pair)
            .map(|&r| if flipped { r.reverse() } else { r })
    }

    pub fn temporal_edges(&self) -> impl Iterator<Item = (&PairId, TemporalRel)> {
        self.temporal.iter().map(|(p, &r)| (p, r))
    }

    pub fn causal_edges(&self) -> impl Iterator<Item = (&PairId, CausalRel)> {
        self.causal.iter().map(|(p, &r)| (p, r))
    }

    pub fn temporal_len(&self) -> usize {
        self.temporal.len()
    }

    pub fn causal_len(&self) -> usize {
        self.causal.len()
    }

    /// Conflicts recorded by the lenient setters.
    pub fn conflicts(&self) -> &[EdgeConflict] {
        &self.conflicts
    }

    /// Node ids appearing in any temporal edge, sorted and deduplicated.
    pub fn temporal_nodes(&self) -> Vec<String> {
        let mut ids: Vec<String> = self
            .temporal
            .keys()
            .flat_map(|p| [p.source.clone(), p.target.clone()])
            .collect();
        ids.sort();
        ids.dedup();
        ids
    }
}

/// A parsed, validated document: nodes plus score tables and optional
/// gold/rule annotations. Immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    nodes: Vec<Node>,
    pub scores: ScoreSet,
    pub gold: Option<RelationGraph>,
    pub rules: Option<BTreeMap<PairId, TemporalRel>>,
}

impl Document {
    /// Assemble and validate a document from already-canonical parts.
    pub fn new(
        id: String,
        mut nodes: Vec<Node>,
        scores: ScoreSet,
        gold: Option<RelationGraph>,
        rules: Option<BTreeMap<PairId, TemporalRel>>,
    ) -> Result<Document> {
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        for w in nodes.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateNode { id: w[0].id.clone() });
            }
        }
        let doc = Document {
            id,
            nodes,
            scores,
            gold,
            rules,
        };
        doc.check_references()?;
        Ok(doc)
    }

    fn check_references(&self) -> Result<()> {
        let check = |pair: &PairId, what: &str| -> Result<()> {
            for id in [pair.source(), pair.target()] {
                if self.node(id).is_none() {
                    return Err(Error::UnknownNode {
                        path: format!("$.{what}"),
                        id: id.to_string(),
                    });
                }
            }
            Ok(())
        };
        for pair in self.scores.temporal.keys() {
            check(pair, "scores.temporal")?;
        }
        for pair in self.scores.causal.keys() {
            check(pair, "scores.causal")?;
        }
        if let Some(gold) = &self.gold {
            for (pair, _) in gold.temporal_edges() {
                check(pair, "gold.temporal")?;
            }
            for (pair, _) in gold.causal_edges() {
                check(pair, "gold.causal")?;
            }
        }
        if let Some(rules) = &self.rules {
            for pair in rules.keys() {
                check(pair, "rules")?;
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes
            .binary_search_by(|n| n.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn pair_category(&self, pair: &PairId) -> Option<PairCategory> {
        let a = self.node(pair.source())?;
        let b = self.node(pair.target())?;
        Some(match (a.kind, b.kind) {
            (NodeKind::Event, NodeKind::Event) => PairCategory::EE,
            (NodeKind::Timex, NodeKind::Timex) => PairCategory::TT,
            _ => PairCategory::ET,
        })
    }
}

// ---------------------------------------------------------------------------
// Timex comparison
// ---------------------------------------------------------------------------

/// Parse a normalized timex value into its granularity interval
/// `[start, end)`. Returns `None` for any form outside the supported
/// four, so partially normalized corpora load with absent comparisons
/// rather than failing.
pub fn parse_timex_interval(value: &str) -> Option<(NaiveDateTime, NaiveDateTime)> {
    let midnight = |d: NaiveDate| d.and_time(NaiveTime::MIN);
    match value.len() {
        4 => {
            let y: i32 = value.parse().ok()?;
            let start = NaiveDate::from_ymd_opt(y, 1, 1)?;
            let end = NaiveDate::from_ymd_opt(y + 1, 1, 1)?;
            Some((midnight(start), midnight(end)))
        }
        7 => {
            let (ys, ms) = value.split_once('-')?;
            let y: i32 = ys.parse().ok()?;
            let m: u32 = ms.parse().ok()?;
            let start = NaiveDate::from_ymd_opt(y, m, 1)?;
            let end = if m == 12 {
                NaiveDate::from_ymd_opt(y + 1, 1, 1)?
            } else {
                NaiveDate::from_ymd_opt(y, m + 1, 1)?
            };
            Some((midnight(start), midnight(end)))
        }
        10 => {
            let d = NaiveDate::parse_from_str(value, "%Y-%m-%d").ok()?;
            Some((midnight(d), midnight(d.succ_opt()?)))
        }
        16 => {
            let t = NaiveDateTime::parse_from_str(value, "%Y-%m-%dT%H:%M").ok()?;
            Some((t, t + Duration::minutes(1)))
        }
        _ => None,
    }
}

/// Relation between two timex nodes from their normalized values, reduced
/// to the six-label set. Absent when either value is missing or
/// unparseable, or when either node is not a timex.
pub fn compare_timex(t1: &Node, t2: &Node) -> Option<TemporalRel> {
    if t1.kind != NodeKind::Timex || t2.kind != NodeKind::Timex {
        return None;
    }
    let (s1, e1) = parse_timex_interval(t1.value.as_deref()?)?;
    let (s2, e2) = parse_timex_interval(t2.value.as_deref()?)?;
    Some(interval_relation(s1, e1, s2, e2))
}

/// All unordered node pairs whose sentence distance is at most `window`
/// (all pairs when `window` is absent; pairs with an unknown sentence
/// index are excluded from windowed enumeration). Deterministic order:
/// lexicographic by node id.
pub fn enumerate_pairs(doc: &Document, window: Option<u32>) -> Vec<(PairId, PairCategory)> {
    let nodes = doc.nodes();
    let mut out = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let (a, b) = (&nodes[i], &nodes[j]);
            if let Some(w) = window {
                match (a.sentence, b.sentence) {
                    (Some(sa), Some(sb)) if sa.abs_diff(sb) <= w => {}
                    _ => continue,
                }
            }
            let (pair, _) = PairId::canonical(&a.id, &b.id).expect("distinct ids");
            let cat = doc.pair_category(&pair).expect("nodes exist");
            out.push((pair, cat));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    id: String,
    nodes: Vec<Node>,
    #[serde(default)]
    scores: RawScores,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gold: Option<RawGraph>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rules: Option<Vec<RawTemporalEdge>>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawScores {
    #[serde(default)]
    temporal: Vec<RawTemporalScore>,
    #[serde(default)]
    causal: Vec<RawCausalScore>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTemporalScore {
    pair: (String, String),
    dist: RawTemporalDist,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTemporalDist {
    b: f64,
    a: f64,
    i: f64,
    ii: f64,
    s: f64,
    v: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCausalScore {
    pair: (String, String),
    dist: RawCausalDist,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCausalDist {
    c: f64,
    cbar: f64,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    #[serde(default)]
    temporal: Vec<RawTemporalEdge>,
    #[serde(default)]
    causal: Vec<RawCausalEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTemporalEdge {
    pair: (String, String),
    label: TemporalRel,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCausalEdge {
    pair: (String, String),
    label: CausalRel,
}

fn json_error(err: serde_path_to_error::Error<serde_json::Error>) -> Error {
    Error::Json {
        path: err.path().to_string(),
        message: err.inner().to_string(),
    }
}

fn from_json_str<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(&mut de).map_err(json_error)
}

impl RawTemporalDist {
    fn to_array(&self) -> [f64; 6] {
        [self.b, self.a, self.i, self.ii, self.s, self.v]
    }

    fn from_array(d: &[f64; 6]) -> Self {
        RawTemporalDist {
            b: d[0],
            a: d[1],
            i: d[2],
            ii: d[3],
            s: d[4],
            v: d[5],
        }
    }
}

fn reverse_dist(d: [f64; 6]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for r in TEMPORAL_LABELS {
        out[r.index()] = d[r.reverse().index()];
    }
    out
}

fn convert_raw(raw: RawDocument) -> Result<Document> {
    let mut scores = ScoreSet::default();
    for (i, row) in raw.scores.temporal.iter().enumerate() {
        let path = format!("$.scores.temporal[{i}]");
        let (a, b) = (&row.pair.0, &row.pair.1);
        let (pair, flipped) = PairId::canonical(a, b).ok_or_else(|| Error::SelfPair {
            path: path.clone(),
            id: a.clone(),
        })?;
        let mut dist = row.dist.to_array();
        for (r, &x) in TEMPORAL_LABELS.iter().zip(dist.iter()) {
            if !x.is_finite() {
                return Err(Error::NonFiniteScore {
                    path,
                    label: r.to_string(),
                });
            }
        }
        if flipped {
            dist = reverse_dist(dist);
        }
        if scores.temporal.insert(pair.clone(), dist).is_some() {
            return Err(Error::DuplicatePair {
                path,
                a: pair.source().to_string(),
                b: pair.target().to_string(),
            });
        }
    }
    for (i, row) in raw.scores.causal.iter().enumerate() {
        let path = format!("$.scores.causal[{i}]");
        let (a, b) = (&row.pair.0, &row.pair.1);
        let (pair, flipped) = PairId::canonical(a, b).ok_or_else(|| Error::SelfPair {
            path: path.clone(),
            id: a.clone(),
        })?;
        for (label, x) in [("c", row.dist.c), ("cbar", row.dist.cbar)] {
            if !x.is_finite() {
                return Err(Error::NonFiniteScore {
                    path: path.clone(),
                    label: label.to_string(),
                });
            }
        }
        let score = if flipped {
            CausalScore {
                c: row.dist.cbar,
                cbar: row.dist.c,
            }
        } else {
            CausalScore {
                c: row.dist.c,
                cbar: row.dist.cbar,
            }
        };
        if scores.causal.insert(pair.clone(), score).is_some() {
            return Err(Error::DuplicatePair {
                path,
                a: pair.source().to_string(),
                b: pair.target().to_string(),
            });
        }
    }

    let gold = match raw.gold {
        None => None,
        Some(g) => {
            let mut graph = RelationGraph::new();
            for edge in &g.temporal {
                graph.set_temporal(&edge.pair.0, &edge.pair.1, edge.label)?;
            }
            for edge in &g.causal {
                graph.set_causal(&edge.pair.0, &edge.pair.1, edge.label)?;
            }
            Some(graph)
        }
    };

    let rules = match raw.rules {
        None => None,
        Some(list) => {
            let mut map: BTreeMap<PairId, TemporalRel> = BTreeMap::new();
            for (i, edge) in list.iter().enumerate() {
                let path = format!("$.rules[{i}]");
                let (pair, flipped) =
                    PairId::canonical(&edge.pair.0, &edge.pair.1).ok_or_else(|| Error::SelfPair {
                        path: path.clone(),
                        id: edge.pair.0.clone(),
                    })?;
                let label = if flipped { edge.label.reverse() } else { edge.label };
                if let Some(&existing) = map.get(&pair) {
                    if existing != label {
                        return Err(Error::SymmetryConflict {
                            a: pair.source().to_string(),
                            b: pair.target().to_string(),
                            first: existing.to_string(),
                            second: label.to_string(),
                        });
                    }
                }
                map.insert(pair, label);
            }
            Some(map)
        }
    };

    // Causal score and gold pairs must join two events.
    let doc = Document::new(raw.id, raw.nodes, scores, gold, rules)?;
    for pair in doc.scores.causal.keys() {
        if doc.pair_category(pair) != Some(PairCategory::EE) {
            return Err(Error::InvalidConfig(format!(
                "$.scores.causal: pair {pair} is not event-event"
            )));
        }
    }
    if let Some(gold) = &doc.gold {
        let bad: Vec<PairId> = gold
            .causal_edges()
            .map(|(p, _)| p.clone())
            .filter(|p| doc.pair_category(p) != Some(PairCategory::EE))
            .collect();
        if let Some(pair) = bad.first() {
            return Err(Error::InvalidConfig(format!(
                "$.gold.causal: pair {pair} is not event-event"
            )));
        }
    }
    Ok(doc)
}

fn to_raw(doc: &Document) -> RawDocument {
    let temporal = doc
        .scores
        .temporal
        .iter()
        .map(|(pair, dist)| RawTemporalScore {
            pair: (pair.source().to_string(), pair.target().to_string()),
            dist: RawTemporalDist::from_array(dist),
        })
        .collect();
    let causal = doc
        .scores
        .causal
        .iter()
        .map(|(pair, s)| RawCausalScore {
            pair: (pair.source().to_string(), pair.target().to_string()),
            dist: RawCausalDist {
                c: s.c,
                cbar: s.cbar,
            },
        })
        .collect();
    let gold = doc.gold.as_ref().map(|g| RawGraph {
        temporal: g
            .temporal_edges()
            .map(|(pair, label)| RawTemporalEdge {
                pair: (pair.source().to_string(), pair.target().to_string()),
                label,
            })
            .collect(),
        causal: g
            .causal_edges()
            .map(|(pair, label)| RawCausalEdge {
                pair: (pair.source().to_string(), pair.target().to_string()),
                label,
            })
            .collect(),
    });
    let rules = doc.rules.as_ref().map(|rules| {
        rules
            .iter()
            .map(|(pair, &label)| RawTemporalEdge {
                pair: (pair.source().to_string(), pair.target().to_string()),
                label,
            })
            .collect()
    });
    RawDocument {
        id: doc.id.clone(),
        nodes: doc.nodes.clone(),
        scores: RawScores { temporal, causal },
        gold,
        rules,
    }
}

/// Parse a standalone relation graph: `{"temporal": [{pair, label}],
/// "causal": [...]}`. Conflicting orientations of the same pair are an
/// error.
pub fn parse_graph(bytes: &[u8]) -> Result<RelationGraph> {
    let raw: RawGraph = from_json_str(bytes)?;
    let mut graph = RelationGraph::new();
    for edge in &raw.temporal {
        graph.set_temporal(&edge.pair.0, &edge.pair.1, edge.label)?;
    }
    for edge in &raw.causal {
        graph.set_causal(&edge.pair.0, &edge.pair.1, edge.label)?;
    }
    Ok(graph)
}

#[derive(Deserialize)]
struct LooseGraph {
    #[serde(default)]
    document: Option<String>,
    #[serde(default)]
    temporal: Vec<RawTemporalEdge>,
    #[serde(default)]
    causal: Vec<RawCausalEdge>,
}

/// Extract a relation graph from either a bare graph object or a solution
/// object (extra keys ignored). Conflicting orientations keep the first
/// label and are recorded on the graph for the validator to report.
/// Returns the graph and the `document` id when present.
pub fn parse_graph_lenient(bytes: &[u8]) -> Result<(RelationGraph, Option<String>)> {
    let raw: LooseGraph = from_json_str(bytes)?;
    let mut graph = RelationGraph::new();
    for edge in &raw.temporal {
        graph.set_temporal_lenient(&edge.pair.0, &edge.pair.1, edge.label);
    }
    for edge in &raw.causal {
        graph.set_causal_lenient(&edge.pair.0, &edge.pair.1, edge.label);
    }
    Ok((graph, raw.document))
}

/// Serialize a relation graph to the bare graph JSON shape.
pub fn serialize_graph(graph: &RelationGraph) -> String {
    let raw = RawGraph {
        temporal: graph
            .temporal_edges()
            .map(|(pair, label)| RawTemporalEdge {
                pair: (pair.source().to_string(), pair.target().to_string()),
                label,
            })
            .collect(),
        causal: graph
            .causal_edges()
            .map(|(pair, label)| RawCausalEdge {
                pair: (pair.source().to_string(), pair.target().to_string()),
                label,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("graph serialization cannot fail")
}

/// Parse one document from UTF-8 JSON, validating the schema and every
/// model invariant. Errors name the JSON path of the offending element.
pub fn parse_document(bytes: &[u8]) -> Result<Document> {
    convert_raw(from_json_str(bytes)?)
}

/// Parse a dataset file: a JSON array of documents.
pub fn parse_dataset(bytes: &[u8]) -> Result<Vec<Document>> {
    let raws: Vec<RawDocument> = from_json_str(bytes)?;
    raws.into_iter().map(convert_raw).collect()
}

/// Serialize one document to canonical pretty JSON.
pub fn serialize_document(doc: &Document) -> String {
    serde_json::to_string_pretty(&to_raw(doc)).expect("document serialization cannot fail")
}

/// Serialize a dataset to canonical pretty JSON.
pub fn serialize_dataset(docs: &[Document]) -> String {
    let raws: Vec<RawDocument> = docs.iter().map(to_raw).collect();
    serde_json::to_string_pretty(&raws).expect("dataset serialization cannot fail")
}
