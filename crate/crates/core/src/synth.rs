//! Seeded synthetic document generation.
//!
//! Each document is built from a real interval model: every node gets an
//! integer-day interval on a shared timeline, gold temporal labels are
//! the reduced interval relations, and timex nodes carry normalized date
//! values whose granularity intervals reproduce those labels exactly.
//! Scores are one-hot on gold, perturbed by zero-mean Gaussian noise and
//! soft-max normalized, so the score tables degrade gracefully as
//! `noise` grows while the gold graph stays consistent by construction.

use std::collections::BTreeMap;

use chrono::{Datelike, Duration, NaiveDate};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::algebra::{interval_relation, trans, CausalRel, TemporalRel};
use crate::error::{Error, Result};
use crate::model::{CausalScore, Document, Node, NodeKind, PairCategory, PairId, RelationGraph, ScoreSet};
use crate::scoring::softmax;

fn default_rule_rate() -> f64 {
    0.1
}

fn default_causal_scale() -> f64 {
    0.5
}

/// Parameters for [`gen_synthetic`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub n_events: usize,
    pub n_timexes: usize,
    /// Probability that a strictly ordered event pair carries a causal
    /// link.
    pub causal_density: f64,
    /// Standard deviation of the additive perturbation applied to the
    /// one-hot gold scores before soft-max normalization.
    pub noise: f64,
    /// Fraction of event-involving gold edges replaced by vague (and
    /// then re-closed so the graph stays consistent).
    pub vague_rate: f64,
    pub seed: u64,
    /// Probability that a sampled causal link points against the
    /// temporal order, modeling causes annotated after their effects.
    pub reversed_causal_rate: f64,
    /// Probability that a (non-reversed) event-involving gold edge is
    /// exposed as a rule pin.
    pub rule_rate: f64,
    /// Multiplier applied to causal score rows; controls how strongly
    /// causal evidence competes with temporal evidence in the joint
    /// objective.
    pub causal_scale: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_events: 6,
            n_timexes: 2,
            causal_density: 0.3,
            noise: 0.5,
            vague_rate: 0.1,
            seed: 0,
            reversed_causal_rate: 0.0,
            rule_rate: default_rule_rate(),
            causal_scale: default_causal_scale(),
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        let nodes = self.n_events + self.n_timexes;
        if nodes < 2 {
            return Err(Error::DegenerateSynthSize { nodes });
        }
        for (name, value) in [
            ("causal_density", self.causal_density),
            ("vague_rate", self.vague_rate),
            ("reversed_causal_rate", self.reversed_causal_rate),
            ("rule_rate", self.rule_rate),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in [0, 1], got {value}"
                )));
            }
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "noise must be a finite non-negative real, got {}",
                self.noise
            )));
        }
        if !(self.causal_scale > 0.0 && self.causal_scale.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "causal_scale must be a finite positive real, got {}",
                self.causal_scale
            )));
        }
        Ok(())
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_slice(bytes);
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Json {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }
}

struct Perturb {
    dist: Option<Normal<f64>>,
}

impl Perturb {
    fn new(noise: f64) -> Self {
        Perturb {
            dist: if noise > 0.0 {
                Some(Normal::new(0.0, noise).expect("validated noise"))
            } else {
                None
            },
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match &self.dist {
            Some(d) => d.sample(rng),
            None => 0.0,
        }
    }
}

/// Generate one synthetic document.
pub fn gen_synthetic(cfg: &SynthConfig) -> Result<Document> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let base = NaiveDate::from_ymd_opt(2010, 1, 1).expect("fixed base date");
    let n_nodes = cfg.n_events + cfg.n_timexes;
    let span = (3 * n_nodes as i64).max(8);
    let n_sentences = (n_nodes as u32 / 2).max(1);

    let mut nodes = Vec::new();
    let mut intervals: BTreeMap<String, (i64, i64)> = BTreeMap::new();

    for i in 0..cfg.n_events {
        let id = format!("e{i:03}");
        let start = rng.random_range(0..span);
        let len = rng.random_range(1..=4);
        intervals.insert(id.clone(), (start, start + len));
        nodes.push(Node {
            id,
            kind: NodeKind::Event,
            surface: None,
            sentence: Some(rng.random_range(0..n_sentences)),
            value: None,
        });
    }

    for i in 0..cfg.n_timexes {
        let id = format!("t{i:03}");
        let day = rng.random_range(0..span);
        let date = base + Duration::days(day);
        let (value, interval) = if rng.random_bool(0.7) {
            (date.format("%Y-%m-%d").to_string(), (day, day + 1))
        } else {
            let first = date.with_day(1).expect("day 1 exists");
            let next = if first.month() == 12 {
                NaiveDate::from_ymd_opt(first.year() + 1, 1, 1)
            } else {
                NaiveDate::from_ymd_opt(first.year(), first.month() + 1, 1)
            }
            .expect("next month exists");
            (
                date.format("%Y-%m").to_string(),
                (
                    (first - base).num_days(),
                    (next - base).num_days(),
                ),
            )
        };
        intervals.insert(id.clone(), interval);
        nodes.push(Node {
            id,
            kind: NodeKind::Timex,
            surface: None,
            sentence: Some(rng.random_range(0..n_sentences)),
            value: Some(value),
        });
    }

    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    let ids: Vec<String> = nodes.iter().map(|n| n.id.clone()).collect();
    let kind_of = |id: &str| nodes.iter().find(|n| n.id == id).map(|n| n.kind).unwrap();
    let category = |a: &str, b: &str| match (kind_of(a), kind_of(b)) {
        (NodeKind::Event, NodeKind::Event) => PairCategory::EE,
        (NodeKind::Timex, NodeKind::Timex) => PairCategory::TT,
        _ => PairCategory::ET,
    };

    // Gold labels from the interval model, over all pairs.
    let mut gold_t: BTreeMap<PairId, TemporalRel> = BTreeMap::new();
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            let (s1, e1) = intervals[&ids[i]];
            let (s2, e2) = intervals[&ids[j]];
            let pair = PairId::canonical(&ids[i], &ids[j]).expect("distinct").0;
            gold_t.insert(pair, interval_relation(s1, e1, s2, e2));
        }
    }

    // Replace a fraction of event-involving edges with vague; timex-timex
    // edges stay date-determined.
    if cfg.vague_rate > 0.0 {
        let keys: Vec<PairId> = gold_t.keys().cloned().collect();
        for pair in keys {
            if category(pair.source(), pair.target()) == PairCategory::TT {
                continue;
            }
            if rng.random_bool(cfg.vague_rate) {
                gold_t.insert(pair, TemporalRel::Vague);
            }
        }
        repair_by_reclosing(&mut gold_t);
    }

    // Causal links on strictly ordered event pairs, directed from the
    // earlier event, with an optional reversed fraction.
    let mut gold_c: BTreeMap<PairId, CausalRel> = BTreeMap::new();
    let mut reversed_nodes: std::collections::BTreeSet<String> = Default::default();
    if cfg.causal_density > 0.0 {
        for (pair, &label) in &gold_t {
            if category(pair.source(), pair.target()) != PairCategory::EE {
                continue;
            }
            let aligned = match label {
                TemporalRel::Before => CausalRel::Causes,
                TemporalRel::After => CausalRel::CausedBy,
                _ => continue,
            };
            if !rng.random_bool(cfg.causal_density) {
                continue;
            }
            gold_c.insert(pair.clone(), aligned);
        }
    }

    // Reverse a fraction of the links against the temporal order,
    // modeling causes annotated after their effects. Note that enforcing
    // gold causal labels as hard constraints can become infeasible on
    // reversed data when enforced links chain through shared nodes; the
    // gold graph itself stays valid for every other constraint family.
    if cfg.reversed_causal_rate > 0.0 {
        let links: Vec<PairId> = gold_c.keys().cloned().collect();
        for pair in links {
            if rng.random_bool(cfg.reversed_causal_rate) {
                let flipped = gold_c[&pair].reverse();
                gold_c.insert(pair.clone(), flipped);
                reversed_nodes.insert(pair.source().to_string());
                reversed_nodes.insert(pair.target().to_string());
            }
        }
    }

    // Rule pins expose a random subset of the gold edges. Pairs touching
    // a reversed causal link are left unpinned: enforcing such a link
    // flips its pair's temporal label against gold, and any pin chain
    // incident to its endpoints could force the gold label back,
    // contradicting it.
    let mut rules: BTreeMap<PairId, TemporalRel> = BTreeMap::new();
    if cfg.rule_rate > 0.0 {
        for (pair, &label) in &gold_t {
            if category(pair.source(), pair.target()) == PairCategory::TT {
                continue;
            }
            if reversed_nodes.contains(pair.source()) || reversed_nodes.contains(pair.target()) {
                continue;
            }
            if rng.random_bool(cfg.rule_rate) {
                rules.insert(pair.clone(), label);
            }
        }
    }

    // Scores: one-hot gold plus noise, soft-max normalized. Timex-timex
    // pairs stay unscored; inference pins them from the dates.
    let perturb = Perturb::new(cfg.noise);
    let mut scores = ScoreSet::default();
    for (pair, &label) in &gold_t {
        if category(pair.source(), pair.target()) == PairCategory::TT {
            continue;
        }
        let mut acts = [0.0f64; 6];
        acts[label.index()] = 1.0;
        for a in acts.iter_mut() {
            *a += perturb.sample(&mut rng);
        }
        let dist = softmax(&acts);
        scores
            .temporal
            .insert(pair.clone(), dist.try_into().expect("six labels"));
    }
    for (pair, &label) in &gold_c {
        let mut acts = [0.0f64; 2];
        match label {
            CausalRel::Causes => acts[0] = 1.0,
            CausalRel::CausedBy => acts[1] = 1.0,
            CausalRel::Null => {}
        }
        for a in acts.iter_mut() {
            *a += perturb.sample(&mut rng);
        }
        let dist = softmax(&acts);
        scores.causal.insert(
            pair.clone(),
            CausalScore {
                c: dist[0] * cfg.causal_scale,
                cbar: dist[1] * cfg.causal_scale,
            },
        );
    }

    let mut gold = RelationGraph::new();
    for (pair, &label) in &gold_t {
        gold.set_temporal(pair.source(), pair.target(), label)?;
    }
    for (pair, &label) in &gold_c {
        gold.set_causal(pair.source(), pair.target(), label)?;
    }

    Document::new(
        format!("synth-{}", cfg.seed),
        nodes,
        scores,
        Some(gold),
        Some(rules),
    )
}

/// Generate `count` documents with consecutive seeds.
pub fn gen_dataset(cfg: &SynthConfig, count: usize) -> Result<Vec<Document>> {
    (0..count)
        .map(|k| {
            gen_synthetic(&SynthConfig {
                seed: cfg.seed.wrapping_add(k as u64),
                ..cfg.clone()
            })
        })
        .collect()
}

/// Un-vague every edge a singleton transitivity composition forces,
/// restoring its (unique, hence original) label, until a fixed point.
/// Keeps the gold graph consistent after random vague substitution.
fn repair_by_reclosing(labels: &mut BTreeMap<PairId, TemporalRel>) {
    let mut ids: Vec<String> = labels
        .keys()
        .flat_map(|p| [p.source().to_string(), p.target().to_string()])
        .collect();
    ids.sort();
    ids.dedup();

    let get = |map: &BTreeMap<PairId, TemporalRel>, a: &str, b: &str| -> Option<TemporalRel> {
        let (pair, flip) = PairId::canonical(a, b)?;
        map.get(&pair).map(|&r| if flip { r.reverse() } else { r })
    };

    loop {
        let mut changed = false;
        for x in &ids {
            for y in &ids {
                if x == y {
                    continue;
                }
                let Some(r1) = get(labels, x, y) else { continue };
                if r1 == TemporalRel::Vague {
                    continue;
                }
                for z in &ids {
                    if z == x || z == y || x >= z {
                        continue;
                    }
                    let Some(r2) = get(labels, y, z) else { continue };
                    if r2 == TemporalRel::Vague {
                        continue;
                    }
                    if get(labels, x, z) != Some(TemporalRel::Vague) {
                        continue;
                    }
                    if let Some(forced) = trans(r1, r2).as_singleton() {
                        let (pair, flip) = PairId::canonical(x, z).expect("distinct");
                        labels.insert(pair, if flip { forced.reverse() } else { forced });
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}
