//! Cross-checks of the metric and ensemble code against the brute-force
//! references in `synthlab` on randomised instances.

use indexmap::IndexMap;
use proptest::prelude::*;
use wenkit::ensemble::{decide, sap};
use wenkit::evalcore::{build_confusion, metric_report, roc_auc, ScoredExample};
use wenkit::rng::SeededRng;
use wenkit::synthlab::{gen_ground_truth, gen_predictor, oracle_auc, oracle_metrics, SyntheticPredictorSpec, POSITIVE};
use wenkit::{ClassIndex, LabelTable, PredictionSet};

fn random_labels(rng: &mut SeededRng, n: usize, k: usize) -> LabelTable {
    // Cycle through the classes first so every class is present.
    let rows = (0..n).map(|i| {
        let c = if i < k { i } else { rng.below(k as u64) as usize };
        (format!("id{i}"), format!("class{c}"))
    });
    LabelTable::from_rows(rows, None).unwrap()
}

fn random_predictions(rng: &mut SeededRng, labels: &LabelTable, model: &str) -> PredictionSet {
    let k = labels.n_classes();
    let rows = labels.ids().map(|id| {
        let raw: Vec<f64> = (0..k).map(|_| (rng.below(8) + 1) as f64).collect();
        let s: f64 = raw.iter().sum();
        (id.to_string(), raw.iter().map(|x| x / s).collect())
    });
    PredictionSet::new(model, labels.class_names().to_vec(), rows).unwrap()
}

#[test]
fn confusion_matches_tally_loop() {
    let mut rng = SeededRng::new(99);
    for _ in 0..20 {
        let labels = random_labels(&mut rng, 50, 3);
        let decisions: IndexMap<String, ClassIndex> =
            labels.ids().map(|id| (id.to_string(), ClassIndex(rng.below(3) as usize))).collect();
        let cm = build_confusion(&labels, &decisions).unwrap();
        let mut tally = vec![vec![0u64; 3]; 3];
        for (id, actual) in labels.iter() {
            tally[actual.get()][decisions[id].get()] += 1;
        }
        assert_eq!(cm.counts(), tally.as_slice());
        assert_eq!(cm.total(), 50);
    }
}

#[test]
fn report_matches_naive_recomputation() {
    let mut rng = SeededRng::new(7);
    for round in 0..50 {
        let labels = random_labels(&mut rng, 40, 2 + round % 3);
        let probs = random_predictions(&mut rng, &labels, "m");
        let report = match metric_report(&labels, &probs, ClassIndex(1)) {
            Ok(r) => r,
            // A draw can predict a single class everywhere, leaving kappa undefined.
            Err(_) => continue,
        };
        let decisions: IndexMap<String, ClassIndex> = probs
            .entries()
            .iter()
            .map(|(id, v)| (id.clone(), decide(v).unwrap()))
            .collect();
        let o = oracle_metrics(&labels, &decisions).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(report.acc, o.accuracy));
        assert!(close(report.wr, o.weighted_recall));
        assert!(close(report.wp, o.weighted_precision));
        assert!(close(report.wfs, o.weighted_f1));
        assert!(close(report.ba, o.balanced_accuracy));
        assert!(close(report.kappa, o.kappa));
        for (c, s) in report.per_class.iter().enumerate() {
            assert!(close(s.precision, o.precision[c]) && close(s.recall, o.recall[c]) && close(s.f1, o.f1[c]));
            assert_eq!(s.support, o.support[c]);
        }
        let scored: Vec<ScoredExample<f64>> = labels
            .iter()
            .map(|(id, c)| ScoredExample::new(id, probs.get(id).unwrap()[1], c == ClassIndex(1)))
            .collect();
        assert!(close(report.auc, oracle_auc(&scored).unwrap()));
    }
}

#[test]
fn renaming_examples_keeps_metrics() {
    let mut rng = SeededRng::new(5);
    let labels = random_labels(&mut rng, 120, 2);
    let probs = random_predictions(&mut rng, &labels, "m");
    let renamed_labels = labels.renamed(|id| format!("zz-{id}")).unwrap();
    let renamed_probs = PredictionSet::new(
        "m",
        probs.class_names().to_vec(),
        probs.entries().iter().map(|(id, v)| (format!("zz-{id}"), v.clone())),
    )
    .unwrap();
    let a = metric_report(&labels, &probs, ClassIndex(1)).unwrap();
    let b = metric_report(&renamed_labels, &renamed_probs, ClassIndex(1)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sap_beats_single_models_on_independent_scorers() {
    let mut wins = 0;
    for seed in 0..100u64 {
        let labels = gen_ground_truth(1000, 1000, seed).unwrap();
        let cands: Vec<PredictionSet> = (1..=5)
            .map(|m| gen_predictor(&labels, POSITIVE, &SyntheticPredictorSpec::new(format!("m{m}"), 0.75, seed)).unwrap())
            .collect();
        let mean_single = cands
            .iter()
            .map(|c| metric_report(&labels, c, POSITIVE).unwrap().acc)
            .sum::<f64>()
            / 5.0;
        let fused = sap(&cands).unwrap().to_prediction_set("sap");
        let acc = metric_report(&labels, &fused, POSITIVE).unwrap().acc;
        wins += (acc > mean_single) as u32;
    }
    assert!(wins >= 95, "{wins}/100");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trapezoid_agrees_with_oracle(seed: u64, n in 2usize..1000, levels in 1u64..50) {
        let mut rng = SeededRng::new(seed);
        let mut scored: Vec<ScoredExample<f64>> = (0..n)
            .map(|i| ScoredExample::new(format!("e{i}"), rng.below(levels + 1) as f64 / levels as f64, rng.below(2) == 1))
            .collect();
        scored[0].label = true;
        scored[1].label = false;
        let a = roc_auc(&scored).unwrap();
        let b = oracle_auc(&scored).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}
