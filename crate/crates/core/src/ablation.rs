//! The ablation ladder: five inference presets, each adding one source
//! of information on top of its predecessor, evaluated over a gold
//! dataset with pairwise significance between consecutive steps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluation::{
    awareness_counts, causal_counts, f1, mcnemar, temporal_correctness, AwarenessCounts,
    McnemarOutcome, TemporalMetrics,
};
use crate::inference::{build_model, solve_exact, solve_local, ConstraintConfig, Solution};
use crate::model::{Document, PairCategory, RelationGraph, ScoreSet};

/// The preset ladder. Timex-date pins stay on throughout (every system
/// gets the date-determined edges); each later step enables one more
/// information source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Per-pair local decisions.
    Baseline,
    /// Global consistency over event-event pairs; event-timex pairs are
    /// still filled in locally.
    Transitivity,
    /// Event-timex pairs join the global problem.
    EventTimex,
    /// Rule pins.
    Rules,
    /// Causal scores and the causal-precedence bridge.
    Causal,
}

pub const PRESETS: [Preset; 5] = [
    Preset::Baseline,
    Preset::Transitivity,
    Preset::EventTimex,
    Preset::Rules,
    Preset::Causal,
];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Baseline => "baseline",
            Preset::Transitivity => "+transitivity",
            Preset::EventTimex => "+ET",
            Preset::Rules => "+rules",
            Preset::Causal => "+causal",
        }
    }

    fn config(self) -> ConstraintConfig {
        let mut cfg = ConstraintConfig {
            symmetry: true,
            tt: true,
            ..ConstraintConfig::default()
        };
        if self != Preset::Baseline {
            cfg.transitivity = true;
        }
        if matches!(self, Preset::Rules | Preset::Causal) {
            cfg.rules = true;
        }
        if self == Preset::Causal {
            cfg.causal_link = true;
        }
        cfg
    }
}

/// Run one preset on one document, returning the solved graph.
pub fn run_preset(doc: &Document, preset: Preset) -> Result<Solution> {
    let cfg = preset.config();
    match preset {
        Preset::Causal => {
            let model = build_model(doc, &cfg)?;
            solve_exact(&model)
        }
        Preset::Baseline | Preset::EventTimex | Preset::Rules => {
            // No causal term yet: drop the causal score rows.
            let view = without_causal(doc)?;
            let model = build_model(&view, &cfg)?;
            solve_exact(&model)
        }
        Preset::Transitivity => {
            // Joint over event-event pairs only; event-timex pairs keep
            // their local argmax labels.
            let view = ee_only(doc)?;
            let model = build_model(&view, &cfg)?;
            let mut solution = solve_exact(&model)?;
            let local = solve_local(doc);
            for (pair, label) in local.temporal {
                if doc.pair_category(&pair) == Some(PairCategory::ET) {
                    solution.temporal.entry(pair).or_insert(label);
                }
            }
            Ok(solution)
        }
    }
}

fn without_causal(doc: &Document) -> Result<Document> {
    Document::new(
        doc.id.clone(),
        doc.nodes().to_vec(),
        ScoreSet {
            temporal: doc.scores.temporal.clone(),
            causal: Default::default(),
        },
        doc.gold.clone(),
        doc.rules.clone(),
    )
}

fn ee_only(doc: &Document) -> Result<Document> {
    let temporal = doc
        .scores
        .temporal
        .iter()
        .filter(|(pair, _)| doc.pair_category(pair) == Some(PairCategory::EE))
        .map(|(pair, dist)| (pair.clone(), *dist))
        .collect();
    Document::new(
        doc.id.clone(),
        doc.nodes().to_vec(),
        ScoreSet {
            temporal,
            causal: Default::default(),
        },
        doc.gold.clone(),
        doc.rules.clone(),
    )
}

/// One row of the ablation table.
#[derive(Debug, Clone, Serialize)]
pub struct PresetOutcome {
    pub name: String,
    pub temporal: TemporalMetrics,
    /// Macro average of per-document F1.
    pub mean_f1: f64,
    pub causal_accuracy: Option<f64>,
    /// Significance of the temporal change versus the previous preset.
    pub mcnemar_vs_prev: Option<McnemarOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AblationReport {
    pub documents: usize,
    pub presets: Vec<PresetOutcome>,
}

impl AblationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16}{:>8}{:>8}{:>8}{:>10}{:>10}{:>12}\n",
            "preset", "P", "R", "F1", "mean F1", "causal", "mcnemar p"
        ));
        for row in &self.presets {
            out.push_str(&format!(
                "{:<16}{:>8.3}{:>8.3}{:>8.3}{:>10.3}{:>10}{:>12}\n",
                row.name,
                row.temporal.p,
                row.temporal.r,
                row.temporal.f1,
                row.mean_f1,
                row.causal_accuracy
                    .map_or("-".to_string(), |a| format!("{a:.3}")),
                row.mcnemar_vs_prev
                    .map_or("-".to_string(), |m| format!("{:.4}", m.p)),
            ));
        }
        out
    }
}

/// Run the full preset ladder over a gold-annotated dataset.
pub fn run_ablation(docs: &[Document]) -> Result<AblationReport> {
    for doc in docs {
        if doc.gold.is_none() {
            return Err(Error::MissingGold);
        }
    }

    let golds: Vec<&RelationGraph> = docs.iter().map(|d| d.gold.as_ref().unwrap()).collect();
    let mut rows: Vec<PresetOutcome> = Vec::new();
    let mut prev_correct: Option<Vec<bool>> = None;

    for preset in PRESETS {
        let mut micro = AwarenessCounts::default();
        let mut f1_sum = 0.0;
        let mut causal_correct = 0usize;
        let mut causal_total = 0usize;
        let mut correctness: Vec<bool> = Vec::new();

        for (doc, gold) in docs.iter().zip(&golds) {
            let solution = run_preset(doc, preset)?;
            let sys = solution.to_graph();
            let counts = awareness_counts(gold, &sys);
            micro.add(counts);
            f1_sum += f1(counts.precision(), counts.recall());
            correctness.extend(temporal_correctness(gold, &sys));

            // Earlier presets report the causal-only baseline (local
            // direction argmax); the joint preset reports its own.
            let causal_graph = if preset == Preset::Causal {
                sys
            } else {
                solve_local(doc).to_graph()
            };
            let (correct, total) = causal_counts(gold, &causal_graph);
            causal_correct += correct;
            causal_total += total;
        }

        let mcnemar_vs_prev = match &prev_correct {
            Some(prev) => {
                let (stat, p) = mcnemar(prev, &correctness)?;
                Some(McnemarOutcome { stat, p })
            }
            None => None,
        };
        prev_correct = Some(correctness);

        rows.push(PresetOutcome {
            name: preset.name().to_string(),
            temporal: micro.into(),
            mean_f1: if docs.is_empty() {
                0.0
            } else {
                f1_sum / docs.len() as f64
            },
            causal_accuracy: if causal_total > 0 {
                Some(causal_correct as f64 / causal_total as f64)
            } else {
                None
            },
            mcnemar_vs_prev,
        });
    }

    Ok(AblationReport {
        documents: docs.len(),
        presets: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{gen_dataset, SynthConfig};

    #[test]
    fn noiseless_dataset_is_perfect_everywhere() {
        let cfg = SynthConfig {
            n_events: 4,
            n_timexes: 1,
            noise: 0.0,
            vague_rate: 0.0,
            seed: 5,
            ..SynthConfig::default()
        };
        let docs = gen_dataset(&cfg, 4).unwrap();
        let report = run_ablation(&docs).unwrap();
        for row in &report.presets {
            assert!(
                (row.temporal.f1 - 1.0).abs() < 1e-12,
                "{}: f1 = {}",
                row.name,
                row.temporal.f1
            );
            assert!((row.mean_f1 - 1.0).abs() < 1e-12);
        }
        // Identical predictions between consecutive presets: p = 1.
        for row in &report.presets[1..] {
            assert_eq!(row.mcnemar_vs_prev.unwrap().p, 1.0);
        }
    }

    #[test]
    fn missing_gold_is_an_error() {
        let cfg = SynthConfig {
            n_events: 3,
            n_timexes: 0,
            seed: 2,
            ..SynthConfig::default()
        };
        let mut docs = gen_dataset(&cfg, 1).unwrap();
        docs[0].gold = None;
        assert!(matches!(run_ablation(&docs), Err(Error::MissingGold)));
    }

    #[test]
    fn report_is_deterministic() {
        let cfg = SynthConfig {
            n_events: 5,
            n_timexes: 1,
            noise: 0.6,
            seed: 21,
            ..SynthConfig::default()
        };
        let docs = gen_dataset(&cfg, 3).unwrap();
        let r1 = run_ablation(&docs).unwrap();
        let r2 = run_ablation(&docs).unwrap();
        assert_eq!(r1.to_json(), r2.to_json());
    }
}
