//! Wire-format properties: canonicalization and round-trip stability of
//! randomly generated documents, including score rows, gold edges, and
//! rules given in reversed orientation.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use tempcausal_core::model::{parse_document, serialize_document};

const TEMPORAL: [&str; 6] = ["b", "a", "i", "ii", "s", "v"];
const CAUSAL: [&str; 2] = ["c", "cbar"];
const VALUES: [&str; 5] = ["2010", "2010-03", "2010-03-15", "2010-03-15T08:30", "not-a-date"];

fn random_raw_document(rng: &mut ChaCha8Rng) -> serde_json::Value {
    let n_events = rng.random_range(2..=4usize);
    let n_timexes = rng.random_range(0..=2usize);
    let mut ids: Vec<String> = (0..n_events).map(|i| format!("ev{i}")).collect();
    let mut nodes: Vec<serde_json::Value> = ids
        .iter()
        .map(|id| {
            json!({
                "id": id,
                "kind": "event",
                "sentence": rng.random_range(0..4u32),
            })
        })
        .collect();
    for i in 0..n_timexes {
        let id = format!("tx{i}");
        nodes.push(json!({
            "id": id,
            "kind": "timex",
            "value": VALUES[rng.random_range(0..VALUES.len())],
        }));
        ids.push(id);
    }

    // A random subset of pairs gets score rows, each in a random
    // orientation.
    let mut pairs = Vec::new();
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            pairs.push((ids[i].clone(), ids[j].clone()));
        }
    }
    pairs.shuffle(rng);

    let mut temporal = Vec::new();
    let mut gold_temporal = Vec::new();
    let mut rules = Vec::new();
    for (a, b) in pairs.iter().take(rng.random_range(1..=pairs.len())) {
        let (x, y) = if rng.random_bool(0.5) {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        let dist: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
        temporal.push(json!({
            "pair": [x.clone(), y.clone()],
            "dist": {
                "b": dist[0], "a": dist[1], "i": dist[2],
                "ii": dist[3], "s": dist[4], "v": dist[5],
            },
        }));
        if rng.random_bool(0.6) {
            gold_temporal.push(json!({
                "pair": [y.clone(), x.clone()],
                "label": TEMPORAL[rng.random_range(0..6)],
            }));
        }
        if rng.random_bool(0.3) {
            rules.push(json!({
                "pair": [x, y],
                "label": TEMPORAL[rng.random_range(0..6)],
            }));
        }
    }

    let mut causal = Vec::new();
    let mut gold_causal = Vec::new();
    for (a, b) in pairs.iter() {
        if !(a.starts_with("ev") && b.starts_with("ev")) {
            continue;
        }
        if rng.random_bool(0.4) {
            causal.push(json!({
                "pair": [a, b],
                "dist": {"c": rng.random_range(0.0..1.0), "cbar": rng.random_range(0.0..1.0)},
            }));
            if rng.random_bool(0.5) {
                gold_causal.push(json!({
                    "pair": [b, a],
                    "label": CAUSAL[rng.random_range(0..2)],
                }));
            }
        }
    }

    let mut doc = json!({
        "id": format!("doc-{}", rng.random_range(0..1000u32)),
        "nodes": nodes,
        "scores": {"temporal": temporal, "causal": causal},
    });
    if rng.random_bool(0.7) {
        doc["gold"] = json!({"temporal": gold_temporal, "causal": gold_causal});
    }
    if rng.random_bool(0.5) {
        doc["rules"] = json!(rules);
    }
    doc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// parse(serialize(d)) == d and serialization is idempotent on the
    /// canonical form, regardless of input pair orientation.
    #[test]
    fn document_roundtrip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = random_raw_document(&mut rng);
        let doc = parse_document(raw.to_string().as_bytes()).unwrap();
        let json = serialize_document(&doc);
        let reparsed = parse_document(json.as_bytes()).unwrap();
        prop_assert_eq!(&reparsed, &doc);
        prop_assert_eq!(serialize_document(&reparsed), json);
    }
}
