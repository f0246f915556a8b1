//! Multi-class averaged perceptron and soft-max scoring.
//!
//! Feature extraction is out of scope: callers supply sparse feature
//! vectors from whatever pipeline they have, and get back confidence
//! distributions suitable for the score tables consumed by inference.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{CAUSAL_LABELS, TEMPORAL_LABELS};
use crate::error::{Error, Result};

/// Sparse feature vector: feature id to value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub BTreeMap<String, f64>);

impl FeatureVector {
    pub fn from_pairs<I: IntoIterator<Item = (&'static str, f64)>>(pairs: I) -> Self {
        FeatureVector(
            pairs
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    fn dot(&self, weights: &BTreeMap<String, f64>) -> f64 {
        self.0
            .iter()
            .map(|(k, v)| weights.get(k).copied().unwrap_or(0.0) * v)
            .sum()
    }
}

/// One training example.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Example {
    pub features: FeatureVector,
    pub label: String,
}

/// Label ordering for the temporal relation set.
pub fn temporal_label_set() -> Vec<String> {
    TEMPORAL_LABELS.iter().map(|r| r.as_str().to_string()).collect()
}

/// Label ordering for directed causal scoring.
pub fn causal_label_set() -> Vec<String> {
    CAUSAL_LABELS[..2].iter().map(|c| c.as_str().to_string()).collect()
}

/// A trained multi-class averaged perceptron: one sparse weight vector
/// per label, already averaged over all weight updates. Immutable; safe
/// for concurrent scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerceptronModel {
    labels: Vec<String>,
    epochs: u32,
    seed: u64,
    weights: BTreeMap<String, BTreeMap<String, f64>>,
}

impl PerceptronModel {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn epochs(&self) -> u32 {
        self.epochs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn weight_vectors(&self) -> Vec<&BTreeMap<String, f64>> {
        self.labels
            .iter()
            .map(|l| self.weights.get(l).expect("one weight vector per label"))
            .collect()
    }

    /// Raw activations `w_r . phi`, aligned with `labels()`.
    pub fn activations(&self, features: &FeatureVector) -> Vec<f64> {
        self.weight_vectors()
            .iter()
            .map(|w| features.dot(w))
            .collect()
    }

    /// Exponential soft-max over the raw activations, aligned with
    /// `labels()`. Activations are max-shifted before exponentiation, so
    /// the result is finite, strictly positive, and sums to one; the
    /// argmax equals the raw-activation argmax.
    pub fn score_distribution(&self, features: &FeatureVector) -> Vec<f64> {
        let acts = self.activations(features);
        softmax(&acts)
    }

    /// Distribution keyed by label.
    pub fn score_map(&self, features: &FeatureVector) -> BTreeMap<String, f64> {
        self.labels
            .iter()
            .cloned()
            .zip(self.score_distribution(features))
            .collect()
    }

    /// Argmax label; ties break toward the earlier label in the model's
    /// label order.
    pub fn predict(&self, features: &FeatureVector) -> &str {
        let acts = self.activations(features);
        &self.labels[argmax(&acts)]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_slice(bytes);
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Json {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }
}

/// Max-shifted exponential soft-max.
pub fn softmax(activations: &[f64]) -> Vec<f64> {
    let m = activations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = activations.iter().map(|a| (a - m).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.iter().map(|e| e / z).collect()
}

/// First index attaining the maximum (deterministic tie-break).
pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Accumulates the running sum of a weight cell over update steps, so the
/// final weights are the average of the weight vector snapshots taken
/// after each update. Trailing error-free passes perform no updates and
/// leave the average untouched.
#[derive(Default, Clone, Copy)]
struct Cell {
    weight: f64,
    total: f64,
    stamp: u64,
}

struct Trainer {
    labels: Vec<String>,
    cells: Vec<BTreeMap<String, Cell>>,
    updates: u64,
}

impl Trainer {
    fn new(labels: &[String]) -> Self {
        Trainer {
            labels: labels.to_vec(),
            cells: vec![BTreeMap::new(); labels.len()],
            updates: 0,
        }
    }

    fn activation(&self, label: usize, features: &FeatureVector) -> f64 {
        features
            .0
            .iter()
            .map(|(k, v)| self.cells[label].get(k).map_or(0.0, |c| c.weight) * v)
            .sum()
    }

    fn bump(&mut self, label: usize, features: &FeatureVector, sign: f64) {
        let step = self.updates;
        for (k, v) in &features.0 {
            let cell = self.cells[label].entry(k.clone()).or_default();
            // Account for the steps the old weight was in effect, then
            // apply the update and count the post-update snapshot.
            cell.total += cell.weight * (step - 1 - cell.stamp) as f64;
            cell.weight += sign * v;
            cell.total += cell.weight;
            cell.stamp = step;
        }
    }

    fn finish(mut self, epochs: u32, seed: u64) -> PerceptronModel {
        let updates = self.updates;
        let mut weights = BTreeMap::new();
        for (label, cells) in self.labels.iter().zip(self.cells.iter_mut()) {
            let mut avg = BTreeMap::new();
            for (k, cell) in cells.iter_mut() {
                if updates > 0 {
                    cell.total += cell.weight * (updates - cell.stamp) as f64;
                    let w = cell.total / updates as f64;
                    if w != 0.0 {
                        avg.insert(k.clone(), w);
                    }
                }
            }
            weights.insert(label.clone(), avg);
        }
        PerceptronModel {
            labels: self.labels,
            epochs,
            seed,
            weights,
        }
    }
}

/// Train a multi-class averaged perceptron.
///
/// Per example: predict `argmax_r w_r . phi` with ties broken by label
/// order; on error add the features to the gold label's weights and
/// subtract them from the predicted label's (unit learning rate). The
/// example order is reshuffled each epoch, deterministically from `seed`.
pub fn train(
    data: &[Example],
    labels: Vec<String>,
    epochs: u32,
    seed: u64,
) -> Result<PerceptronModel> {
    if data.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if epochs == 0 {
        return Err(Error::ZeroEpochs);
    }
    for (index, ex) in data.iter().enumerate() {
        if !labels.contains(&ex.label) {
            return Err(Error::LabelOutsideSet {
                index,
                label: ex.label.clone(),
            });
        }
    }

    let mut trainer = Trainer::new(&labels);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..data.len()).collect();

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &idx in &order {
            let ex = &data[idx];
            let acts: Vec<f64> = (0..labels.len())
                .map(|l| trainer.activation(l, &ex.features))
                .collect();
            let predicted = argmax(&acts);
            let gold = labels.iter().position(|l| l == &ex.label).unwrap();
            if predicted != gold {
                trainer.updates += 1;
                trainer.bump(gold, &ex.features, 1.0);
                trainer.bump(predicted, &ex.features, -1.0);
            }
        }
    }
    Ok(trainer.finish(epochs, seed))
}

/// Fraction of examples the model labels correctly.
pub fn accuracy(model: &PerceptronModel, data: &[Example]) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let correct = data
        .iter()
        .filter(|ex| model.predict(&ex.features) == ex.label)
        .count();
    correct as f64 / data.len() as f64
}

/// Parse a training-set file: a JSON array of `{features, label}`.
pub fn parse_training_set(bytes: &[u8]) -> Result<Vec<Example>> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn fv(pairs: &[(&'static str, f64)]) -> FeatureVector {
        FeatureVector::from_pairs(pairs.iter().copied())
    }

    fn two_labels() -> Vec<String> {
        vec!["pos".into(), "neg".into()]
    }

    #[test]
    fn single_example_converges_in_one_epoch() {
        let data = vec![Example {
            features: fv(&[("x", 1.0), ("y", 2.0)]),
            label: "neg".into(),
        }];
        let model = train(&data, two_labels(), 1, 0).unwrap();
        assert_eq!(model.predict(&data[0].features), "neg");
    }

    #[test]
    fn rejects_empty_data_and_zero_epochs() {
        assert!(matches!(
            train(&[], two_labels(), 1, 0),
            Err(Error::EmptyTrainingSet)
        ));
        let data = vec![Example {
            features: fv(&[("x", 1.0)]),
            label: "pos".into(),
        }];
        assert!(matches!(
            train(&data, two_labels(), 0, 0),
            Err(Error::ZeroEpochs)
        ));
        let bad = vec![Example {
            features: fv(&[("x", 1.0)]),
            label: "other".into(),
        }];
        assert!(matches!(
            train(&bad, two_labels(), 1, 0),
            Err(Error::LabelOutsideSet { .. })
        ));
    }

    /// 200 points with a known separating hyperplane and margin must be
    /// fit perfectly within 50 epochs.
    #[test]
    fn separable_set_reaches_full_accuracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut data = Vec::new();
        // True separator: 2*x1 - x2 + 0.5*x3, with a wide margin band so
        // the update-averaged weights separate cleanly too.
        let w = [2.0, -1.0, 0.5];
        while data.len() < 200 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let score: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
            if score.abs() < 0.6 {
                continue;
            }
            data.push(Example {
                features: FeatureVector(
                    [("f1", x[0]), ("f2", x[1]), ("f3", x[2])]
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), v))
                        .collect(),
                ),
                label: if score > 0.0 { "pos".into() } else { "neg".into() },
            });
        }
        let model = train(&data, two_labels(), 50, 7).unwrap();
        assert_eq!(accuracy(&model, &data), 1.0);
    }

    #[test]
    fn training_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let labels: Vec<String> = temporal_label_set();
        let data: Vec<Example> = (0..60)
            .map(|i| Example {
                features: FeatureVector(
                    (0..4)
                        .map(|j| (format!("f{j}"), rng.random_range(-1.0..1.0)))
                        .collect(),
                ),
                label: labels[i % labels.len()].clone(),
            })
            .collect();
        let m1 = train(&data, labels.clone(), 5, 11).unwrap();
        let m2 = train(&data, labels, 5, 11).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.to_json(), m2.to_json());
    }

    #[test]
    fn zero_weight_model_is_uniform() {
        let data = vec![Example {
            features: fv(&[("x", 1.0)]),
            label: "b".into(),
        }];
        // Gold is the tie-break label, so no update ever happens and the
        // averaged weights stay zero.
        let model = train(&data, temporal_label_set(), 3, 0).unwrap();
        let dist = model.score_distribution(&fv(&[("x", 5.0), ("q", -2.0)]));
        for p in &dist {
            assert!((p - 1.0 / 6.0).abs() < 1e-12);
        }
        assert_eq!(model.predict(&data[0].features), "b");
    }

    #[test]
    fn softmax_values() {
        // Equal activations: uniform.
        let u = softmax(&[2.0; 6]);
        for p in &u {
            assert!((p - 1.0 / 6.0).abs() < 1e-12);
        }
        // Two labels, activations (1, 0).
        let d = softmax(&[1.0, 0.0]);
        let e = std::f64::consts::E;
        assert!((d[0] - e / (e + 1.0)).abs() < 1e-12);
        assert!((d[1] - 1.0 / (e + 1.0)).abs() < 1e-12);
        assert!((d[0] - 0.7311).abs() < 5e-5);
        assert!((d[1] - 0.2689).abs() < 5e-5);
    }

    #[test]
    fn softmax_shift_invariance_and_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let acts: Vec<f64> = (0..6).map(|_| rng.random_range(-30.0..30.0)).collect();
            let shifted: Vec<f64> = acts.iter().map(|a| a + 17.25).collect();
            let d1 = softmax(&acts);
            let d2 = softmax(&shifted);
            assert!((d1.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for (a, b) in d1.iter().zip(&d2) {
                assert!((a - b).abs() < 1e-9);
                assert!(*a > 0.0);
            }
            assert_eq!(argmax(&d1), argmax(&acts));
        }
    }

    #[test]
    fn scaling_weights_preserves_argmax() {
        let data: Vec<Example> = vec![
            Example {
                features: fv(&[("x", 1.0)]),
                label: "pos".into(),
            },
            Example {
                features: fv(&[("x", -1.0)]),
                label: "neg".into(),
            },
        ];
        let model = train(&data, two_labels(), 5, 0).unwrap();
        let mut scaled = model.clone();
        for w in scaled.weights.values_mut() {
            for v in w.values_mut() {
                *v *= 3.5;
            }
        }
        for ex in &data {
            assert_eq!(model.predict(&ex.features), scaled.predict(&ex.features));
        }
    }

    #[test]
    fn trailing_clean_epochs_do_not_change_average() {
        let data: Vec<Example> = vec![
            Example {
                features: fv(&[("x", 1.0), ("bias", 1.0)]),
                label: "pos".into(),
            },
            Example {
                features: fv(&[("x", -1.0), ("bias", 1.0)]),
                label: "neg".into(),
            },
        ];
        // This set is fit after few epochs; once error-free, additional
        // epochs add no updates, so the averaged weights are unchanged.
        let m_short = train(&data, two_labels(), 10, 5).unwrap();
        let m_long = train(&data, two_labels(), 200, 5).unwrap();
        assert_eq!(m_short.weights, m_long.weights);
    }

    #[test]
    fn model_json_roundtrip() {
        let data = vec![Example {
            features: fv(&[("x", 2.0)]),
            label: "neg".into(),
        }];
        let model = train(&data, two_labels(), 2, 1).unwrap();
        let parsed = PerceptronModel::from_json(model.to_json().as_bytes()).unwrap();
        assert_eq!(parsed, model);
    }
}
