//! Cross-module solver properties on small random instances: oracle
//! equivalence, validator cleanliness, local-equals-unconstrained, and
//! run-to-run determinism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tempcausal_core::evaluation::validate;
use tempcausal_core::inference::{
    build_model, solve_bruteforce, solve_exact, solve_local, ConstraintConfig,
};
use tempcausal_core::synth::{gen_synthetic, SynthConfig};

fn small_instance(k: u64, rng: &mut ChaCha8Rng) -> (tempcausal_core::model::Document, ConstraintConfig) {
    let sizes = [(3, 0), (2, 1), (3, 1), (2, 2)];
    let (n_events, n_timexes) = sizes[rng.random_range(0..sizes.len())];
    let doc = gen_synthetic(&SynthConfig {
        n_events,
        n_timexes,
        causal_density: rng.random_range(0.0..0.6),
        noise: rng.random_range(0.2..1.0),
        vague_rate: rng.random_range(0.0..0.3),
        seed: 7_000_000 + k,
        reversed_causal_rate: 0.0,
        rule_rate: rng.random_range(0.0..0.4),
        causal_scale: 0.5,
    })
    .unwrap();
    let cfg = ConstraintConfig {
        symmetry: true,
        transitivity: rng.random_bool(0.8),
        tt: rng.random_bool(0.8),
        rules: rng.random_bool(0.8),
        causal_link: rng.random_bool(0.8),
        enforce_gold_temporal: rng.random_bool(0.2),
        enforce_gold_causal: rng.random_bool(0.2),
        ..ConstraintConfig::default()
    };
    (doc, cfg)
}

#[test]
fn exact_matches_bruteforce_and_validates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..100 {
        let (doc, cfg) = small_instance(k, &mut rng);
        let model = build_model(&doc, &cfg).unwrap();
        let exact = solve_exact(&model).unwrap();
        let brute = solve_bruteforce(&model).unwrap();
        assert!(
            (exact.objective - brute.objective).abs() <= 1e-9,
            "instance {k}: {} vs {}",
            exact.objective,
            brute.objective
        );
        assert!(
            (exact.objective
                - recompute_objective(&model, &exact))
            .abs()
                < 1e-9
        );
        for solution in [&exact, &brute] {
            let report = validate(&solution.to_graph(), &doc, &cfg);
            assert!(report.is_empty(), "instance {k}: {:?}", report.violations.first());
        }
    }
}

fn recompute_objective(
    model: &tempcausal_core::inference::IlpModel,
    solution: &tempcausal_core::inference::Solution,
) -> f64 {
    let mut total = 0.0;
    for var in &model.temporal {
        total += var.coeff[solution.temporal[&var.pair].index()];
    }
    for var in &model.causal {
        total += var.coeff[solution.causal[&var.pair].index()];
    }
    total
}

#[test]
fn local_equals_unconstrained_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..50 {
        let (doc, _) = small_instance(k, &mut rng);
        let local = solve_local(&doc);
        let model = build_model(&doc, &ConstraintConfig::none()).unwrap();
        let exact = solve_exact(&model).unwrap();
        assert!(
            (local.objective - exact.objective).abs() <= 1e-12,
            "instance {k}: {} vs {}",
            local.objective,
            exact.objective
        );
    }
}

#[test]
fn solver_outputs_are_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..25 {
        let (doc, cfg) = small_instance(k, &mut rng);
        let m1 = build_model(&doc, &cfg).unwrap();
        let m2 = build_model(&doc, &cfg).unwrap();
        let s1 = solve_exact(&m1).unwrap();
        let s2 = solve_exact(&m2).unwrap();
        assert_eq!(s1.temporal, s2.temporal);
        assert_eq!(s1.causal, s2.causal);
        assert_eq!(s1.objective, s2.objective);
        assert_eq!(s1.stats.nodes_expanded, s2.stats.nodes_expanded);
    }
}
