//! The joint inference problem and its solvers.
//!
//! [`build_model`] turns a document plus a [`ConstraintConfig`] into an
//! integer program over indicator variables: six per scored temporal
//! pair, three per scored causal pair. Symmetry is structural: one
//! variable block per canonical unordered pair, with reversed
//! orientations reading through the reversal maps, so `y_(i,j)^r =
//! y_(j,i)^r̄` holds by construction. Pins (timex dates, rules, enforced
//! gold) restrict variable domains or fix unscored pairs outright;
//! transitivity rows and the causal-precedence bridge are kept as
//! explicit constraints.
//!
//! [`solve_exact`] is a self-contained depth-first branch-and-bound with
//! constraint propagation; [`solve_bruteforce`] is the exhaustive oracle
//! for small instances; [`solve_local`] is the per-pair argmax baseline
//! that ignores every constraint.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{trans, CausalRel, LabelSet, TemporalRel, CAUSAL_LABELS, TEMPORAL_LABELS};
use crate::error::{Error, Result};
use crate::model::{compare_timex, CausalScore, Document, NodeKind, PairId, RelationGraph};

/// Which constraint families inference enforces.
///
/// `symmetry` is listed for completeness and configuration
/// compatibility: the canonical-pair variable encoding satisfies it by
/// construction, so the flag changes nothing about the search space.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstraintConfig {
    pub symmetry: bool,
    pub transitivity: bool,
    pub tt: bool,
    pub rules: bool,
    pub causal_link: bool,
    pub enforce_gold_temporal: bool,
    pub enforce_gold_causal: bool,
    /// Restrict gold-temporal enforcement to these pairs (all gold pairs
    /// when absent). Not part of the wire format.
    #[serde(skip)]
    pub gold_temporal_pairs: Option<BTreeSet<PairId>>,
    /// Restrict gold-causal enforcement to these pairs.
    #[serde(skip)]
    pub gold_causal_pairs: Option<BTreeSet<PairId>>,
}

impl ConstraintConfig {
    /// Everything off: local scoring only.
    pub fn none() -> Self {
        Self::default()
    }

    /// All constraint families on, gold enforcement off.
    pub fn full() -> Self {
        ConstraintConfig {
            symmetry: true,
            transitivity: true,
            tt: true,
            rules: true,
            causal_link: true,
            ..Self::default()
        }
    }

    pub fn covers_gold_temporal(&self, pair: &PairId) -> bool {
        match &self.gold_temporal_pairs {
            None => true,
            Some(set) => set.contains(pair),
        }
    }

    pub fn covers_gold_causal(&self, pair: &PairId) -> bool {
        match &self.gold_causal_pairs {
            None => true,
            Some(set) => set.contains(pair),
        }
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_slice(bytes);
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Json {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }
}

/// A set of causal labels, packed into one byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CausalSet(u8);

impl CausalSet {
    pub const EMPTY: CausalSet = CausalSet(0);
    pub const FULL: CausalSet = CausalSet(0b111);

    pub fn singleton(c: CausalRel) -> Self {
        CausalSet(1 << c.index())
    }

    pub fn contains(self, c: CausalRel) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn remove(&mut self, c: CausalRel) {
        self.0 &= !(1 << c.index());
    }

    pub fn intersect(self, other: CausalSet) -> CausalSet {
        CausalSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn as_singleton(self) -> Option<CausalRel> {
        if self.len() == 1 {
            Some(CausalRel::from_index(self.0.trailing_zeros() as usize))
        } else {
            None
        }
    }

    pub fn iter(self) -> impl Iterator<Item = CausalRel> {
        CAUSAL_LABELS.into_iter().filter(move |c| self.contains(*c))
    }
}

/// One block of six temporal indicator variables for a canonical pair.
#[derive(Debug, Clone)]
pub struct TemporalVar {
    pub pair: PairId,
    /// Objective coefficients `p_i^r`, indexed by `TemporalRel::index()`.
    pub coeff: [f64; 6],
    /// Admissible labels after pinning.
    pub domain: LabelSet,
}

/// One block of three causal indicator variables for a canonical
/// event-event pair. The `null` coefficient is zero: score tables carry
/// only the two directed scores, so predicting no relation earns
/// nothing.
#[derive(Debug, Clone)]
pub struct CausalVar {
    pub pair: PairId,
    /// Coefficients `q_j^r` for (c, cbar, null).
    pub coeff: [f64; 3],
    pub domain: CausalSet,
}

/// A reference to one oriented pair inside a constraint: either a
/// variable block (with the orientation flip relative to canonical) or a
/// pinned constant label, already oriented.
#[derive(Debug, Clone, Copy)]
pub enum PairRef {
    Var { idx: usize, flip: bool },
    Fixed(TemporalRel),
}

/// One transitivity constraint instance for an ordered node triple
/// `(m1, m2, m3)`: the label of `(m1, m3)` must lie in
/// `Trans(label(m1, m2), label(m2, m3))`. Expands to the linear rows
/// `y_(m1,m2)^r1 + y_(m2,m3)^r2 - sum_{r3 in Trans(r1,r2)} y_(m1,m3)^r3 <= 1`
/// for every label pair whose Trans set is not the full set.
#[derive(Debug, Clone)]
pub struct TripleConstraint {
    pub nodes: [String; 3],
    /// `(m1, m2)`, `(m2, m3)`, `(m1, m3)` in that order.
    pub refs: [PairRef; 3],
}

/// The causal-precedence bridge for one causal pair:
/// `w^c = w_rev^cbar <= y^b` and symmetrically `w^cbar <= y^a` on the
/// canonical orientation.
#[derive(Debug, Clone)]
pub struct CausalLink {
    pub causal: usize,
    pub temporal: PairRef,
}

/// The assembled optimization problem.
#[derive(Debug, Clone)]
pub struct IlpModel {
    pub doc_id: String,
    pub temporal: Vec<TemporalVar>,
    pub causal: Vec<CausalVar>,
    /// Pinned pairs with no score row: constants of the solution.
    pub fixed_temporal: BTreeMap<PairId, TemporalRel>,
    pub fixed_causal: BTreeMap<PairId, CausalRel>,
    pub triples: Vec<TripleConstraint>,
    pub causal_links: Vec<CausalLink>,
    /// Resolved pin conflicts and skipped timex comparisons.
    pub diagnostics: Vec<String>,
    pub cfg: ConstraintConfig,
}

impl IlpModel {
    pub fn variable_count(&self) -> usize {
        6 * self.temporal.len() + 3 * self.causal.len()
    }

    pub fn exactly_one_count(&self) -> usize {
        self.temporal.len() + self.causal.len()
    }

    pub fn pin_count(&self) -> usize {
        self.temporal.iter().filter(|v| v.domain.len() == 1).count()
            + self.causal.iter().filter(|v| v.domain.len() == 1).count()
            + self.fixed_temporal.len()
            + self.fixed_causal.len()
    }

    fn ref_domain(&self, r: PairRef) -> LabelSet {
        match r {
            PairRef::Fixed(label) => LabelSet::singleton(label),
            PairRef::Var { idx, flip } => {
                let d = self.temporal[idx].domain;
                if flip {
                    d.reversed()
                } else {
                    d
                }
            }
        }
    }

    /// Number of expanded linear transitivity rows, skipping tautologies.
    pub fn transitivity_row_count(&self) -> usize {
        let mut rows = 0;
        for t in &self.triples {
            let d1 = self.ref_domain(t.refs[0]);
            let d2 = self.ref_domain(t.refs[1]);
            for r1 in d1.iter() {
                for r2 in d2.iter() {
                    if trans(r1, r2) != LabelSet::FULL {
                        rows += 1;
                    }
                }
            }
        }
        rows
    }
}

// ---------------------------------------------------------------------------
// Model building
// ---------------------------------------------------------------------------

struct PinTable {
    pins: BTreeMap<PairId, (TemporalRel, &'static str)>,
    diagnostics: Vec<String>,
}

impl PinTable {
    fn new() -> Self {
        PinTable {
            pins: BTreeMap::new(),
            diagnostics: Vec::new(),
        }
    }

    /// Insert a pin, resolving conflicts by source trust: timex dates
    /// outrank gold, gold outranks rules. Conflicts are diagnosed, never
    /// silently dropped.
    fn insert(&mut self, pair: PairId, label: TemporalRel, source: &'static str) {
        match self.pins.get(&pair) {
            None => {
                self.pins.insert(pair, (label, source));
            }
            Some(&(existing, existing_source)) => {
                if existing == label {
                    return;
                }
                let rank = |s: &str| match s {
                    "tt" => 2,
                    "gold" => 1,
                    _ => 0,
                };
                if rank(source) > rank(existing_source) {
                    self.diagnostics.push(format!(
                        "{existing_source} pin {existing} on {pair} conflicts with {source} pin {label}; {source} wins"
                    ));
                    self.pins.insert(pair, (label, source));
                } else {
                    self.diagnostics.push(format!(
                        "{source} pin {label} on {pair} conflicts with {existing_source} pin {existing}; {existing_source} wins"
                    ));
                }
            }
        }
    }
}

/// Build the joint model for a parsed document under `cfg`.
pub fn build_model(doc: &Document, cfg: &ConstraintConfig) -> Result<IlpModel> {
    let mut temporal: Vec<TemporalVar> = doc
        .scores
        .temporal
        .iter()
        .map(|(pair, coeff)| TemporalVar {
            pair: pair.clone(),
            coeff: *coeff,
            domain: LabelSet::FULL,
        })
        .collect();
    let mut causal: Vec<CausalVar> = doc
        .scores
        .causal
        .iter()
        .map(|(pair, &CausalScore { c, cbar })| CausalVar {
            pair: pair.clone(),
            coeff: [c, cbar, 0.0],
            domain: CausalSet::FULL,
        })
        .collect();
    let temporal_index: BTreeMap<PairId, usize> = temporal
        .iter()
        .enumerate()
        .map(|(i, v)| (v.pair.clone(), i))
        .collect();

    let mut pins = PinTable::new();

    if cfg.tt {
        let timexes: Vec<_> = doc
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::Timex)
            .collect();
        for (i, t1) in timexes.iter().enumerate() {
            for t2 in timexes.iter().skip(i + 1) {
                let (pair, flipped) =
                    PairId::canonical(&t1.id, &t2.id).expect("node ids are unique");
                match compare_timex(t1, t2) {
                    Some(r) => {
                        let label = if flipped { r.reverse() } else { r };
                        pins.insert(pair, label, "tt");
                    }
                    None => pins.diagnostics.push(format!(
                        "timex pair {pair} left unpinned: normalized value missing or unparseable"
                    )),
                }
            }
        }
    }

    if cfg.enforce_gold_temporal {
        let gold = doc.gold.as_ref().ok_or(Error::MissingGold)?;
        if let Some(requested) = &cfg.gold_temporal_pairs {
            for pair in requested {
                if gold.temporal(pair.source(), pair.target()).is_none() {
                    return Err(Error::MissingGoldPair {
                        a: pair.source().to_string(),
                        b: pair.target().to_string(),
                        kind: "temporal".to_string(),
                    });
                }
            }
        }
        for (pair, label) in gold.temporal_edges() {
            if cfg.covers_gold_temporal(pair) {
                pins.insert(pair.clone(), label, "gold");
            }
        }
    }

    if cfg.rules {
        if let Some(rules) = &doc.rules {
            for (pair, &label) in rules {
                pins.insert(pair.clone(), label, "rule");
            }
        }
    }

    let mut fixed_temporal = BTreeMap::new();
    for (pair, (label, _)) in &pins.pins {
        match temporal_index.get(pair) {
            Some(&idx) => temporal[idx].domain = LabelSet::singleton(*label),
            None => {
                fixed_temporal.insert(pair.clone(), *label);
            }
        }
    }

    let mut fixed_causal = BTreeMap::new();
    if cfg.enforce_gold_causal {
        let gold = doc.gold.as_ref().ok_or(Error::MissingGold)?;
        if let Some(requested) = &cfg.gold_causal_pairs {
            for pair in requested {
                if gold.causal(pair.source(), pair.target()).is_none() {
                    return Err(Error::MissingGoldPair {
                        a: pair.source().to_string(),
                        b: pair.target().to_string(),
                        kind: "causal".to_string(),
                    });
                }
            }
        }
        let causal_index: BTreeMap<PairId, usize> = causal
            .iter()
            .enumerate()
            .map(|(i, v)| (v.pair.clone(), i))
            .collect();
        for (pair, label) in gold.causal_edges() {
            if cfg.covers_gold_causal(pair) {
                match causal_index.get(pair) {
                    Some(&idx) => causal[idx].domain = CausalSet::singleton(label),
                    None => {
                        fixed_causal.insert(pair.clone(), label);
                    }
                }
            }
        }
    }

    // Orient a pair reference for constraint use.
    let ref_for = |a: &str, b: &str| -> Option<PairRef> {
        let (pair, flip) = PairId::canonical(a, b)?;
        if let Some(&idx) = temporal_index.get(&pair) {
            return Some(PairRef::Var { idx, flip });
        }
        fixed_temporal.get(&pair).map(|&label| {
            PairRef::Fixed(if flip { label.reverse() } else { label })
        })
    };

    let mut causal_links = Vec::new();
    if cfg.causal_link {
        for (idx, var) in causal.iter().enumerate() {
            let temporal_ref =
                ref_for(var.pair.source(), var.pair.target()).ok_or_else(|| {
                    Error::MissingTemporalForCausal {
                        a: var.pair.source().to_string(),
                        b: var.pair.target().to_string(),
                    }
                })?;
            causal_links.push(CausalLink {
                causal: idx,
                temporal: temporal_ref,
            });
        }
        // Unscored pinned causal pairs still bridge into the temporal
        // side: translate them to pins or reject outright conflicts.
        for (pair, &label) in &fixed_causal {
            let required = match label {
                CausalRel::Causes => TemporalRel::Before,
                CausalRel::CausedBy => TemporalRel::After,
                CausalRel::Null => continue,
            };
            match ref_for(pair.source(), pair.target()) {
                Some(PairRef::Var { idx, flip }) => {
                    let want = if flip { required.reverse() } else { required };
                    temporal[idx].domain = temporal[idx].domain.intersect(LabelSet::singleton(want));
                }
                Some(PairRef::Fixed(actual)) => {
                    if actual != required {
                        return Err(Error::Infeasible {
                            detail: format!(
                                "pinned causal {label} on {pair} requires temporal {required}, but {pair} is pinned {actual}"
                            ),
                        });
                    }
                }
                None => {
                    return Err(Error::MissingTemporalForCausal {
                        a: pair.source().to_string(),
                        b: pair.target().to_string(),
                    })
                }
            }
        }
    }

    let mut triples = Vec::new();
    if cfg.transitivity {
        let mut node_set: BTreeSet<&str> = BTreeSet::new();
        for v in &temporal {
            node_set.insert(v.pair.source());
            node_set.insert(v.pair.target());
        }
        for pair in fixed_temporal.keys() {
            node_set.insert(pair.source());
            node_set.insert(pair.target());
        }
        let nodes: Vec<&str> = node_set.into_iter().collect();
        let n = nodes.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (x, y, z) = (nodes[i], nodes[j], nodes[k]);
                    let (Some(xy), Some(yz), Some(xz)) =
                        (ref_for(x, y), ref_for(y, z), ref_for(x, z))
                    else {
                        continue;
                    };
                    // Three orderings with a canonical conclusion pair;
                    // the remaining three are their mirror images and
                    // hold automatically because the table is closed
                    // under the symmetry rule.
                    let orderings: [([&str; 3], [PairRef; 3]); 3] = [
                        ([x, y, z], [xy, yz, xz]),
                        ([y, x, z], [flip_ref(xy), xz, yz]),
                        ([x, z, y], [xz, flip_ref(yz), xy]),
                    ];
                    for (ids, refs) in orderings {
                        if let [PairRef::Fixed(r1), PairRef::Fixed(r2), PairRef::Fixed(r3)] = refs {
                            if !trans(r1, r2).contains(r3) {
                                return Err(Error::Infeasible {
                                    detail: format!(
                                        "pinned labels violate transitivity on ({}, {}, {}): ({r1}, {r2}) admits {}, found {r3}",
                                        ids[0], ids[1], ids[2], trans(r1, r2)
                                    ),
                                });
                            }
                            continue;
                        }
                        triples.push(TripleConstraint {
                            nodes: [ids[0].to_string(), ids[1].to_string(), ids[2].to_string()],
                            refs,
                        });
                    }
                }
            }
        }
    }

    Ok(IlpModel {
        doc_id: doc.id.clone(),
        temporal,
        causal,
        fixed_temporal,
        fixed_causal,
        triples,
        causal_links,
        diagnostics: pins.diagnostics,
        cfg: cfg.clone(),
    })
}

fn flip_ref(r: PairRef) -> PairRef {
    match r {
        PairRef::Var { idx, flip } => PairRef::Var { idx, flip: !flip },
        PairRef::Fixed(label) => PairRef::Fixed(label.reverse()),
    }
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes_expanded: u64,
    pub ms: u64,
}

/// A complete label assignment with its objective value.
#[derive(Debug, Clone)]
pub struct Solution {
    pub doc_id: String,
    pub temporal: BTreeMap<PairId, TemporalRel>,
    pub causal: BTreeMap<PairId, CausalRel>,
    pub objective: f64,
    pub stats: SolveStats,
}

impl Solution {
    pub fn to_graph(&self) -> RelationGraph {
        let mut g = RelationGraph::new();
        for (pair, &label) in &self.temporal {
            g.set_temporal(pair.source(), pair.target(), label)
                .expect("canonical solution edges cannot conflict");
        }
        for (pair, &label) in &self.causal {
            g.set_causal(pair.source(), pair.target(), label)
                .expect("canonical solution edges cannot conflict");
        }
        g
    }
}

#[derive(Serialize, Deserialize)]
struct RawSolution {
    document: String,
    objective: f64,
    temporal: Vec<RawEdge>,
    causal: Vec<RawCausalEdge>,
    stats: SolveStats,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    pair: (String, String),
    label: TemporalRel,
}

#[derive(Serialize, Deserialize)]
struct RawCausalEdge {
    pair: (String, String),
    label: CausalRel,
}

impl Solution {
    pub fn to_json(&self) -> String {
        let raw = RawSolution {
            document: self.doc_id.clone(),
            objective: self.objective,
            temporal: self
                .temporal
                .iter()
                .map(|(p, &label)| RawEdge {
                    pair: (p.source().to_string(), p.target().to_string()),
                    label,
                })
                .collect(),
            causal: self
                .causal
                .iter()
                .map(|(p, &label)| RawCausalEdge {
                    pair: (p.source().to_string(), p.target().to_string()),
                    label,
                })
                .collect(),
            stats: self.stats,
        };
        serde_json::to_string_pretty(&raw).expect("solution serialization cannot fail")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_slice(bytes);
        let raw: RawSolution =
            serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Json {
                path: e.path().to_string(),
                message: e.inner().to_string(),
            })?;
        let mut temporal = BTreeMap::new();
        for edge in raw.temporal {
            let (pair, flip) =
                PairId::canonical(&edge.pair.0, &edge.pair.1).ok_or_else(|| Error::SelfPair {
                    path: "$.temporal".to_string(),
                    id: edge.pair.0.clone(),
                })?;
            let label = if flip { edge.label.reverse() } else { edge.label };
            temporal.insert(pair, label);
        }
        let mut causal = BTreeMap::new();
        for edge in raw.causal {
            let (pair, flip) =
                PairId::canonical(&edge.pair.0, &edge.pair.1).ok_or_else(|| Error::SelfPair {
                    path: "$.causal".to_string(),
                    id: edge.pair.0.clone(),
                })?;
            let label = if flip { edge.label.reverse() } else { edge.label };
            causal.insert(pair, label);
        }
        Ok(Solution {
            doc_id: raw.document,
            temporal,
            causal,
            objective: raw.objective,
            stats: raw.stats,
        })
    }
}

// ---------------------------------------------------------------------------
// Exact solver
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct State {
    temporal: Vec<LabelSet>,
    causal: Vec<CausalSet>,
}

impl State {
    fn oriented(&self, r: PairRef) -> LabelSet {
        match r {
            PairRef::Fixed(label) => LabelSet::singleton(label),
            PairRef::Var { idx, flip } => {
                if flip {
                    self.temporal[idx].reversed()
                } else {
                    self.temporal[idx]
                }
            }
        }
    }

    /// Intersect the oriented domain of `r` with `allowed`. Returns
    /// whether anything was pruned; an emptied domain is an error
    /// carrying the pair index.
    fn restrict(&mut self, r: PairRef, allowed: LabelSet) -> std::result::Result<bool, usize> {
        match r {
            PairRef::Fixed(label) => {
                if allowed.contains(label) {
                    Ok(false)
                } else {
                    Err(usize::MAX)
                }
            }
            PairRef::Var { idx, flip } => {
                let canonical_allowed = if flip { allowed.reversed() } else { allowed };
                let next = self.temporal[idx].intersect(canonical_allowed);
                if next == self.temporal[idx] {
                    Ok(false)
                } else if next.is_empty() {
                    Err(idx)
                } else {
                    self.temporal[idx] = next;
                    Ok(true)
                }
            }
        }
    }
}

/// Fixpoint constraint propagation: generalized arc consistency on every
/// transitivity triple and on the causal bridge. Sound for
/// branch-and-bound because only labels with no feasible support are
/// removed. `Err` carries a human-readable description of the emptied
/// domain.
fn propagate(model: &IlpModel, state: &mut State) -> std::result::Result<(), String> {
    loop {
        let mut changed = false;

        for t in &model.triples {
            let d1 = state.oriented(t.refs[0]);
            let d2 = state.oriented(t.refs[1]);
            let d3 = state.oriented(t.refs[2]);

            // Support for the conclusion.
            let mut allowed3 = LabelSet::EMPTY;
            for r1 in d1.iter() {
                for r2 in d2.iter() {
                    allowed3 = allowed3.union(trans(r1, r2));
                }
            }
            // Support for each premise.
            let mut allowed1 = LabelSet::EMPTY;
            for r1 in d1.iter() {
                'outer1: for r2 in d2.iter() {
                    if !trans(r1, r2).intersect(d3).is_empty() {
                        allowed1.insert(r1);
                        break 'outer1;
                    }
                }
            }
            let mut allowed2 = LabelSet::EMPTY;
            for r2 in d2.iter() {
                'outer2: for r1 in d1.iter() {
                    if !trans(r1, r2).intersect(d3).is_empty() {
                        allowed2.insert(r2);
                        break 'outer2;
                    }
                }
            }

            for (pref, allowed) in [
                (t.refs[2], allowed3),
                (t.refs[0], allowed1),
                (t.refs[1], allowed2),
            ] {
                match state.restrict(pref, allowed) {
                    Ok(pruned) => changed |= pruned,
                    Err(idx) => {
                        let which = if idx == usize::MAX {
                            format!("pinned pair in triple ({}, {}, {})", t.nodes[0], t.nodes[1], t.nodes[2])
                        } else {
                            format!("pair {}", model.temporal[idx].pair)
                        };
                        return Err(format!(
                            "transitivity over ({}, {}, {}) leaves no admissible label for {which}",
                            t.nodes[0], t.nodes[1], t.nodes[2]
                        ));
                    }
                }
            }
        }

        for link in &model.causal_links {
            let t_dom = state.oriented(link.temporal);
            let c_dom = &mut state.causal[link.causal];
            let before = *c_dom;
            if !t_dom.contains(TemporalRel::Before) {
                c_dom.remove(CausalRel::Causes);
            }
            if !t_dom.contains(TemporalRel::After) {
                c_dom.remove(CausalRel::CausedBy);
            }
            if c_dom.is_empty() {
                return Err(format!(
                    "causal pair {} has no admissible label under the precedence bridge",
                    model.causal[link.causal].pair
                ));
            }
            changed |= *c_dom != before;

            // A decided causal direction narrows the temporal side.
            let mut allowed_t = LabelSet::EMPTY;
            for c in c_dom.iter() {
                match c {
                    CausalRel::Causes => allowed_t.insert(TemporalRel::Before),
                    CausalRel::CausedBy => allowed_t.insert(TemporalRel::After),
                    CausalRel::Null => allowed_t = allowed_t.union(LabelSet::FULL),
                }
            }
            match state.restrict(link.temporal, allowed_t) {
                Ok(pruned) => changed |= pruned,
                Err(_) => {
                    return Err(format!(
                        "causal pin on {} conflicts with the temporal label of the same pair",
                        model.causal[link.causal].pair
                    ))
                }
            }
        }

        if !changed {
            return Ok(());
        }
    }
}

/// Upper bound on any completion of `state`: per-pair maxima of the
/// labels not yet excluded, summed in fixed variable order (assigned
/// pairs contribute their selected coefficient).
fn bound(model: &IlpModel, state: &State) -> f64 {
    let mut total = 0.0;
    for (var, dom) in model.temporal.iter().zip(&state.temporal) {
        total += dom
            .iter()
            .map(|r| var.coeff[r.index()])
            .fold(f64::NEG_INFINITY, f64::max);
    }
    for (var, dom) in model.causal.iter().zip(&state.causal) {
        total += dom
            .iter()
            .map(|c| var.coeff[c.index()])
            .fold(f64::NEG_INFINITY, f64::max);
    }
    total
}

fn objective_of(model: &IlpModel, state: &State) -> f64 {
    let mut total = 0.0;
    for (var, dom) in model.temporal.iter().zip(&state.temporal) {
        let r = dom.as_singleton().expect("leaf state is fully assigned");
        total += var.coeff[r.index()];
    }
    for (var, dom) in model.causal.iter().zip(&state.causal) {
        let c = dom.as_singleton().expect("leaf state is fully assigned");
        total += var.coeff[c.index()];
    }
    total
}

struct Search<'a> {
    model: &'a IlpModel,
    best: Option<(f64, State)>,
    nodes_expanded: u64,
}

impl Search<'_> {
    fn dfs(&mut self, state: State) {
        // Next undecided variable in fixed order: temporal blocks first.
        let next_t = state.temporal.iter().position(|d| d.len() > 1);
        let next_c = if next_t.is_none() {
            state.causal.iter().position(|d| d.len() > 1)
        } else {
            None
        };

        if next_t.is_none() && next_c.is_none() {
            let obj = objective_of(self.model, &state);
            if self.best.as_ref().is_none_or(|(b, _)| obj > *b) {
                self.best = Some((obj, state));
            }
            return;
        }

        if let Some(idx) = next_t {
            let var = &self.model.temporal[idx];
            let mut labels: Vec<TemporalRel> = state.temporal[idx].iter().collect();
            labels.sort_by(|&a, &b| {
                var.coeff[b.index()]
                    .partial_cmp(&var.coeff[a.index()])
                    .unwrap()
                    .then(a.index().cmp(&b.index()))
            });
            for label in labels {
                self.branch_temporal(&state, idx, label);
            }
        } else if let Some(idx) = next_c {
            let var = &self.model.causal[idx];
            let mut labels: Vec<CausalRel> = state.causal[idx].iter().collect();
            labels.sort_by(|&a, &b| {
                var.coeff[b.index()]
                    .partial_cmp(&var.coeff[a.index()])
                    .unwrap()
                    .then(a.index().cmp(&b.index()))
            });
            for label in labels {
                let mut child = state.clone();
                child.causal[idx] = CausalSet::singleton(label);
                self.descend(child);
            }
        }
    }

    fn branch_temporal(&mut self, state: &State, idx: usize, label: TemporalRel) {
        let mut child = state.clone();
        child.temporal[idx] = LabelSet::singleton(label);
        self.descend(child);
    }

    fn descend(&mut self, mut child: State) {
        self.nodes_expanded += 1;
        if propagate(self.model, &mut child).is_err() {
            return;
        }
        if let Some((best_obj, _)) = &self.best {
            if bound(self.model, &child) <= *best_obj {
                return;
            }
        }
        self.dfs(child);
    }
}

/// Exact global optimum by depth-first branch-and-bound with constraint
/// propagation. Deterministic: fixed variable order (pairs
/// lexicographic, temporal before causal), highest-coefficient label
/// tried first with canonical-order tie-breaking, and an admissible
/// bound that sums per-pair maxima over the labels propagation has not
/// excluded.
pub fn solve_exact(model: &IlpModel) -> Result<Solution> {
    let start = Instant::now();
    let mut root = State {
        temporal: model.temporal.iter().map(|v| v.domain).collect(),
        causal: model.causal.iter().map(|v| v.domain).collect(),
    };
    propagate(model, &mut root).map_err(|detail| Error::Infeasible { detail })?;

    let mut search = Search {
        model,
        best: None,
        nodes_expanded: 0,
    };
    search.dfs(root);
    let (objective, state) = search
        .best
        .ok_or_else(|| Error::Infeasible {
            detail: "search exhausted without a feasible assignment".to_string(),
        })?;

    Ok(assemble(
        model,
        &state,
        objective,
        SolveStats {
            nodes_expanded: search.nodes_expanded,
            ms: start.elapsed().as_millis() as u64,
        },
    ))
}

fn assemble(model: &IlpModel, state: &State, objective: f64, stats: SolveStats) -> Solution {
    let mut temporal: BTreeMap<PairId, TemporalRel> = model
        .temporal
        .iter()
        .zip(&state.temporal)
        .map(|(v, d)| (v.pair.clone(), d.as_singleton().expect("assigned")))
        .collect();
    for (pair, &label) in &model.fixed_temporal {
        temporal.insert(pair.clone(), label);
    }
    let mut causal: BTreeMap<PairId, CausalRel> = model
        .causal
        .iter()
        .zip(&state.causal)
        .map(|(v, d)| (v.pair.clone(), d.as_singleton().expect("assigned")))
        .collect();
    for (pair, &label) in &model.fixed_causal {
        causal.insert(pair.clone(), label);
    }
    Solution {
        doc_id: model.doc_id.clone(),
        temporal,
        causal,
        objective,
        stats,
    }
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

const BRUTE_FORCE_LIMIT: usize = 10;

/// Exhaustive enumeration of every label assignment, checking each
/// constraint directly (no propagation, no bounding). Ties break toward
/// the lexicographically first assignment in canonical label order.
pub fn solve_bruteforce(model: &IlpModel) -> Result<Solution> {
    let start = Instant::now();
    let nt = model.temporal.len();
    let nc = model.causal.len();
    if nt + nc > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            pairs: nt + nc,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let mut assignment = vec![0usize; nt + nc];
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut visited: u64 = 0;

    loop {
        visited += 1;
        if feasible(model, &assignment) {
            let obj = brute_objective(model, &assignment);
            if best.as_ref().is_none_or(|(b, _)| obj > *b) {
                best = Some((obj, assignment.clone()));
            }
        }

        // Odometer increment, least-significant position last.
        let mut pos = nt + nc;
        loop {
            if pos == 0 {
                match best {
                    Some((objective, labels)) => {
                        let state = State {
                            temporal: (0..nt)
                                .map(|i| LabelSet::singleton(TemporalRel::from_index(labels[i])))
                                .collect(),
                            causal: (0..nc)
                                .map(|i| CausalSet::singleton(CausalRel::from_index(labels[nt + i])))
                                .collect(),
                        };
                        return Ok(assemble(
                            model,
                            &state,
                            objective,
                            SolveStats {
                                nodes_expanded: visited,
                                ms: start.elapsed().as_millis() as u64,
                            },
                        ));
                    }
                    None => {
                        return Err(Error::Infeasible {
                            detail: "no assignment satisfies every constraint".to_string(),
                        })
                    }
                }
            }
            pos -= 1;
            let base = if pos < nt { 6 } else { 3 };
            assignment[pos] += 1;
            if assignment[pos] < base {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

fn assigned_label(assignment: &[usize], r: PairRef) -> TemporalRel {
    match r {
        PairRef::Fixed(label) => label,
        PairRef::Var { idx, flip } => {
            let label = TemporalRel::from_index(assignment[idx]);
            if flip {
                label.reverse()
            } else {
                label
            }
        }
    }
}

fn feasible(model: &IlpModel, assignment: &[usize]) -> bool {
    let nt = model.temporal.len();
    for (i, var) in model.temporal.iter().enumerate() {
        if !var.domain.contains(TemporalRel::from_index(assignment[i])) {
            return false;
        }
    }
    for (i, var) in model.causal.iter().enumerate() {
        if !var.domain.contains(CausalRel::from_index(assignment[nt + i])) {
            return false;
        }
    }
    for t in &model.triples {
        let r1 = assigned_label(assignment, t.refs[0]);
        let r2 = assigned_label(assignment, t.refs[1]);
        let r3 = assigned_label(assignment, t.refs[2]);
        if !trans(r1, r2).contains(r3) {
            return false;
        }
    }
    for link in &model.causal_links {
        let w = CausalRel::from_index(assignment[nt + link.causal]);
        let t_label = assigned_label(assignment, link.temporal);
        let ok = match w {
            CausalRel::Causes => t_label == TemporalRel::Before,
            CausalRel::CausedBy => t_label == TemporalRel::After,
            CausalRel::Null => true,
        };
        if !ok {
            return false;
        }
    }
    true
}

fn brute_objective(model: &IlpModel, assignment: &[usize]) -> f64 {
    let nt = model.temporal.len();
    let mut total = 0.0;
    for (i, var) in model.temporal.iter().enumerate() {
        total += var.coeff[assignment[i]];
    }
    for (i, var) in model.causal.iter().enumerate() {
        total += var.coeff[assignment[nt + i]];
    }
    total
}

// ---------------------------------------------------------------------------
// Local baseline
// ---------------------------------------------------------------------------

/// Independent per-pair argmax of the score tables, ignoring every
/// constraint. Ties break toward the earlier label in canonical order.
pub fn solve_local(doc: &Document) -> Solution {
    let mut temporal = BTreeMap::new();
    let mut objective = 0.0;
    for (pair, coeff) in &doc.scores.temporal {
        let mut best = TemporalRel::Before;
        for r in TEMPORAL_LABELS {
            if coeff[r.index()] > coeff[best.index()] {
                best = r;
            }
        }
        objective += coeff[best.index()];
        temporal.insert(pair.clone(), best);
    }
    let mut causal = BTreeMap::new();
    for (pair, score) in &doc.scores.causal {
        let coeff = [score.c, score.cbar, 0.0];
        let mut best = CausalRel::Causes;
        for c in CAUSAL_LABELS {
            if coeff[c.index()] > coeff[best.index()] {
                best = c;
            }
        }
        objective += coeff[best.index()];
        causal.insert(pair.clone(), best);
    }
    Solution {
        doc_id: doc.id.clone(),
        temporal,
        causal,
        objective,
        stats: SolveStats::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Node, ScoreSet};
    use TemporalRel::{After as A, Before as B, Simultaneous as S};

    fn event(id: &str) -> Node {
        Node {
            id: id.into(),
            kind: NodeKind::Event,
            surface: None,
            sentence: Some(0),
            value: None,
        }
    }

    fn one_hot(r: TemporalRel, peak: f64, rest: f64) -> [f64; 6] {
        let mut d = [rest; 6];
        d[r.index()] = peak;
        d
    }

    fn pid(a: &str, b: &str) -> PairId {
        PairId::canonical(a, b).unwrap().0
    }

    fn doc_three_events(scores: &[(&str, &str, [f64; 6])]) -> Document {
        let mut set = ScoreSet::default();
        for (a, b, dist) in scores {
            set.temporal.insert(pid(a, b), *dist);
        }
        Document::new(
            "t".into(),
            vec![event("A"), event("B"), event("C")],
            set,
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn counting_three_events() {
        let doc = doc_three_events(&[
            ("A", "B", one_hot(B, 0.9, 0.02)),
            ("B", "C", one_hot(B, 0.9, 0.02)),
            ("A", "C", one_hot(A, 0.5, 0.1)),
        ]);
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        assert_eq!(model.variable_count(), 18);
        assert_eq!(model.exactly_one_count(), 3);
        assert_eq!(model.triples.len(), 3);
        assert!(model.transitivity_row_count() > 0);
    }

    #[test]
    fn single_pair_argmax() {
        let doc = doc_three_events(&[("A", "B", one_hot(B, 0.9, 0.02))]);
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        let sol = solve_bruteforce(&model).unwrap();
        assert_eq!(sol.temporal[&pid("A", "B")], B);
        assert!((sol.objective - 0.9).abs() < 1e-12);
        let exact = solve_exact(&model).unwrap();
        assert_eq!(exact.temporal, sol.temporal);
    }

    #[test]
    fn transitivity_overrides_weak_local_evidence() {
        let doc = doc_three_events(&[
            ("A", "B", one_hot(B, 0.9, 0.02)),
            ("B", "C", one_hot(B, 0.9, 0.02)),
            ("A", "C", one_hot(A, 0.3, 0.25)),
        ]);
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        let exact = solve_exact(&model).unwrap();
        let brute = solve_bruteforce(&model).unwrap();
        assert!((exact.objective - brute.objective).abs() < 1e-9);
        // (A,C) must come from Trans(b, b) = {b}.
        assert_eq!(exact.temporal[&pid("A", "C")], B);
    }

    #[test]
    fn rule_pin_is_enforced() {
        let mut rules = BTreeMap::new();
        rules.insert(pid("A", "B"), B);
        let mut set = ScoreSet::default();
        set.temporal.insert(pid("A", "B"), one_hot(A, 0.99, 0.001));
        let doc = Document::new(
            "t".into(),
            vec![event("A"), event("B")],
            set,
            None,
            Some(rules),
        )
        .unwrap();
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        assert_eq!(model.temporal[0].domain, LabelSet::singleton(B));
        let sol = solve_exact(&model).unwrap();
        assert_eq!(sol.temporal[&pid("A", "B")], B);
    }

    #[test]
    fn pinned_simultaneity_forces_the_composition() {
        // (e5, e6) pinned s by rule; (e6, e7) scored towards b; then
        // (e5, e7) must come from Trans(s, b) = {b} even against its own
        // local evidence.
        let mut rules = BTreeMap::new();
        rules.insert(pid("e5", "e6"), S);
        let mut set = ScoreSet::default();
        set.temporal.insert(pid("e5", "e6"), [0.2; 6]);
        set.temporal.insert(pid("e6", "e7"), one_hot(B, 0.9, 0.02));
        set.temporal.insert(pid("e5", "e7"), one_hot(A, 0.4, 0.1));
        let doc = Document::new(
            "ex".into(),
            vec![event("e5"), event("e6"), event("e7")],
            set,
            None,
            Some(rules),
        )
        .unwrap();
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        let exact = solve_exact(&model).unwrap();
        let brute = solve_bruteforce(&model).unwrap();
        assert!((exact.objective - brute.objective).abs() < 1e-9);
        assert_eq!(exact.temporal[&pid("e5", "e7")], B);
    }

    #[test]
    fn causal_link_blocks_wrong_direction() {
        let mut set = ScoreSet::default();
        set.temporal.insert(pid("A", "B"), one_hot(A, 0.9, 0.02));
        set.causal.insert(pid("A", "B"), CausalScore { c: 0.3, cbar: 0.1 });
        let doc = Document::new(
            "t".into(),
            vec![event("A"), event("B")],
            set,
            None,
            None,
        )
        .unwrap();
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        assert_eq!(model.causal_links.len(), 1);
        let sol = solve_exact(&model).unwrap();
        // Temporal evidence dominates: (A,B)=a, so c is blocked; cbar
        // pays 0.1 over null's 0 and is admissible under y^a.
        assert_eq!(sol.temporal[&pid("A", "B")], A);
        assert_eq!(sol.causal[&pid("A", "B")], CausalRel::CausedBy);
        let brute = solve_bruteforce(&model).unwrap();
        assert!((sol.objective - brute.objective).abs() < 1e-9);
    }

    #[test]
    fn causal_evidence_can_flip_temporal() {
        let mut set = ScoreSet::default();
        set.temporal.insert(pid("A", "B"), [0.30, 0.28, 0.1, 0.1, 0.1, 0.12]);
        set.causal.insert(pid("A", "B"), CausalScore { c: 0.1, cbar: 0.9 });
        let doc = Document::new(
            "t".into(),
            vec![event("A"), event("B")],
            set,
            None,
            None,
        )
        .unwrap();
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        let sol = solve_exact(&model).unwrap();
        // 0.28 + 0.9 beats 0.30 + max(0.1 under b, 0 for null).
        assert_eq!(sol.temporal[&pid("A", "B")], A);
        assert_eq!(sol.causal[&pid("A", "B")], CausalRel::CausedBy);
    }

    #[test]
    fn causal_pair_requires_temporal_score() {
        let mut set = ScoreSet::default();
        set.causal.insert(pid("A", "B"), CausalScore { c: 0.6, cbar: 0.4 });
        let doc = Document::new(
            "t".into(),
            vec![event("A"), event("B")],
            set,
            None,
            None,
        )
        .unwrap();
        assert!(matches!(
            build_model(&doc, &ConstraintConfig::full()),
            Err(Error::MissingTemporalForCausal { .. })
        ));
        // Without the bridge the model builds fine.
        let cfg = ConstraintConfig {
            causal_link: false,
            ..ConstraintConfig::full()
        };
        assert!(build_model(&doc, &cfg).is_ok());
    }

    #[test]
    fn infeasible_pins_reported() {
        let mut rules = BTreeMap::new();
        rules.insert(pid("A", "B"), B);
        rules.insert(pid("B", "C"), S);
        rules.insert(pid("A", "C"), A);
        let doc = Document::new(
            "t".into(),
            vec![event("A"), event("B"), event("C")],
            ScoreSet::default(),
            None,
            Some(rules),
        )
        .unwrap();
        // All three pairs are unscored constants: the conflict surfaces
        // at build time.
        assert!(matches!(
            build_model(&doc, &ConstraintConfig::full()),
            Err(Error::Infeasible { .. })
        ));

        // With score rows the pins restrict variable domains instead and
        // both solvers must agree on infeasibility.
        let mut set = ScoreSet::default();
        for (a, b) in [("A", "B"), ("B", "C"), ("A", "C")] {
            set.temporal.insert(pid(a, b), [0.2; 6]);
        }
        let mut rules = BTreeMap::new();
        rules.insert(pid("A", "B"), B);
        rules.insert(pid("B", "C"), S);
        rules.insert(pid("A", "C"), A);
        let doc = Document::new(
            "t".into(),
            vec![event("A"), event("B"), event("C")],
            set,
            None,
            Some(rules),
        )
        .unwrap();
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        assert!(matches!(solve_exact(&model), Err(Error::Infeasible { .. })));
        assert!(matches!(
            solve_bruteforce(&model),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn opposite_pins_on_one_pair_are_infeasible() {
        // A rule pins (A,B) = b while enforcing the gold causal label
        // cbar forces (A,B) = a through the precedence bridge.
        let mut rules = BTreeMap::new();
        rules.insert(pid("A", "B"), B);
        let mut gold = RelationGraph::new();
        gold.set_causal("A", "B", CausalRel::CausedBy).unwrap();
        let mut set = ScoreSet::default();
        set.temporal.insert(pid("A", "B"), [0.2; 6]);
        set.causal.insert(pid("A", "B"), CausalScore { c: 0.5, cbar: 0.5 });
        let doc = Document::new(
            "t".into(),
            vec![event("A"), event("B")],
            set,
            Some(gold),
            Some(rules),
        )
        .unwrap();
        let cfg = ConstraintConfig {
            enforce_gold_causal: true,
            ..ConstraintConfig::full()
        };
        let model = build_model(&doc, &cfg).unwrap();
        assert!(matches!(solve_exact(&model), Err(Error::Infeasible { .. })));
        assert!(matches!(
            solve_bruteforce(&model),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn unconstrained_exact_equals_local() {
        let doc = doc_three_events(&[
            ("A", "B", [0.3, 0.1, 0.2, 0.15, 0.15, 0.1]),
            ("B", "C", [0.1, 0.4, 0.1, 0.1, 0.2, 0.1]),
            ("A", "C", [0.25; 6]),
        ]);
        let local = solve_local(&doc);
        let model = build_model(&doc, &ConstraintConfig::none()).unwrap();
        let exact = solve_exact(&model).unwrap();
        assert!((local.objective - exact.objective).abs() < 1e-12);
        // Uniform scores tie-break to b.
        assert_eq!(local.temporal[&pid("A", "C")], B);
    }

    #[test]
    fn brute_force_size_limit() {
        let mut set = ScoreSet::default();
        let ids: Vec<String> = (0..6).map(|i| format!("e{i}")).collect();
        for i in 0..ids.len() {
            for j in (i + 1)..ids.len() {
                set.temporal.insert(pid(&ids[i], &ids[j]), [0.2; 6]);
            }
        }
        let nodes: Vec<Node> = ids.iter().map(|id| event(id)).collect();
        let doc = Document::new("t".into(), nodes, set, None, None).unwrap();
        let model = build_model(&doc, &ConstraintConfig::none()).unwrap();
        assert_eq!(model.temporal.len(), 15);
        assert!(matches!(
            solve_bruteforce(&model),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn solver_is_deterministic() {
        let doc = doc_three_events(&[
            ("A", "B", [0.3, 0.3, 0.1, 0.1, 0.1, 0.1]),
            ("B", "C", [0.25, 0.25, 0.2, 0.1, 0.1, 0.1]),
            ("A", "C", [0.2, 0.2, 0.2, 0.2, 0.1, 0.1]),
        ]);
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        let s1 = solve_exact(&model).unwrap();
        let s2 = solve_exact(&model).unwrap();
        assert_eq!(s1.temporal, s2.temporal);
        assert_eq!(s1.causal, s2.causal);
        assert_eq!(s1.objective, s2.objective);
    }

    #[test]
    fn solution_json_roundtrip() {
        let doc = doc_three_events(&[("A", "B", one_hot(B, 0.9, 0.02))]);
        let model = build_model(&doc, &ConstraintConfig::full()).unwrap();
        let sol = solve_exact(&model).unwrap();
        let parsed = Solution::from_json(sol.to_json().as_bytes()).unwrap();
        assert_eq!(parsed.temporal, sol.temporal);
        assert_eq!(parsed.causal, sol.causal);
        assert!((parsed.objective - sol.objective).abs() < 1e-12);
    }

    #[test]
    fn config_json_shape() {
        let cfg = ConstraintConfig::from_json(
            br#"{"symmetry":true,"transitivity":true,"tt":false,"rules":false,"causal_link":true,"enforce_gold_temporal":false,"enforce_gold_causal":false}"#,
        )
        .unwrap();
        assert!(cfg.transitivity);
        assert!(cfg.causal_link);
        assert!(!cfg.tt);
        // Partial configs default missing families to off.
        let partial = ConstraintConfig::from_json(br#"{"transitivity":true}"#).unwrap();
        assert!(partial.transitivity && !partial.rules);
        assert!(ConstraintConfig::from_json(br#"{"transitivityy":true}"#).is_err());
    }
}
