//! Soft-voting fusion of per-model class probabilities.
//!
//! Two aggregation rules are provided. [`sap`] averages the candidates'
//! probability vectors and renormalises by the total mass. [`wen`] weighs
//! each candidate by a non-negative scalar, typically one of its validation
//! metrics obtained through [`derive_weights`].
//!
//! Both rules share one kernel. Candidates are always visited in model-id
//! order, so results do not depend on the order in which they are passed,
//! and weights are rescaled by their maximum before use, so equal weights
//! reproduce [`sap`] bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::evalcore::{ClassIndex, MetricReport};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Allowed deviation of an input probability vector's sum from 1.
pub const SUM_TOLERANCE: f64 = 1e-6;

/// Checks a probability vector and rescales it to unit sum.
///
/// Components must lie in `[0, 1]` and sum to 1 within [`SUM_TOLERANCE`].
/// Vectors whose sum is already 1 up to rounding are left untouched, which
/// makes the operation idempotent.
pub fn normalize_probabilities<T: Scalar>(v: &mut [T], n_classes: usize) -> std::result::Result<(), String> {
    if v.len() != n_classes {
        return Err(format!("expected {n_classes} probabilities, found {}", v.len()));
    }
    if let Some(bad) = v.iter().find(|&&p| !(p >= T::zero() && p <= T::one())) {
        return Err(format!("probability {bad} outside [0, 1]"));
    }
    let sum: T = v.iter().copied().sum();
    if (sum - T::one()).abs() > T::lit(SUM_TOLERANCE) {
        return Err(format!("probabilities sum to {sum}, not 1"));
    }
    if (sum - T::one()).abs() > T::epsilon() * T::from_count(n_classes as u64) {
        v.iter_mut().for_each(|p| *p = *p / sum);
    }
    Ok(())
}

/// One model's class-probability vectors, keyed by example id.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet<T> {
    model_id: String,
    class_names: Vec<String>,
    entries: IndexMap<String, Vec<T>>,
}

impl<T: Scalar> PredictionSet<T> {
    /// Builds a validated set; every vector is checked and renormalised.
    pub fn new(
        model_id: impl Into<String>,
        class_names: Vec<String>,
        rows: impl IntoIterator<Item = (String, Vec<T>)>,
    ) -> Result<Self> {
        let n = class_names.len();
        if n == 0 {
            return Err(Error::Invalid("prediction set needs at least one class".into()));
        }
        let mut entries = IndexMap::new();
        for (id, mut v) in rows {
            normalize_probabilities(&mut v, n).map_err(|m| Error::Invalid(format!("'{id}': {m}")))?;
            if entries.insert(id.clone(), v).is_some() {
                return Err(Error::Invalid(format!("duplicate example id '{id}'")));
            }
        }
        Ok(PredictionSet {
            model_id: model_id.into(),
            class_names,
            entries,
        })
    }

    /// Wraps vectors that are already known to be valid.
    pub(crate) fn from_trusted(model_id: String, class_names: Vec<String>, entries: IndexMap<String, Vec<T>>) -> Self {
        PredictionSet {
            model_id,
            class_names,
            entries,
        }
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn with_model_id(mut self, model_id: impl Into<String>) -> Self {
        self.model_id = model_id.into();
        self
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn entries(&self) -> &IndexMap<String, Vec<T>> {
        &self.entries
    }

    pub fn get(&self, example_id: &str) -> Option<&[T]> {
        self.entries.get(example_id).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Source of ensemble weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScheme {
    /// Unweighted average.
    Sap,
    Acc,
    Auc,
    /// Support-weighted F1.
    F1,
    /// Cohen's kappa, clamped below at zero.
    Kappa,
}

impl WeightScheme {
    pub const ALL: [WeightScheme; 5] = [Self::Sap, Self::Acc, Self::Auc, Self::F1, Self::Kappa];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sap => "sap",
            Self::Acc => "acc",
            Self::Auc => "auc",
            Self::F1 => "f1",
            Self::Kappa => "kappa",
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown weight scheme '{s}'")))
    }
}

/// Non-negative per-model weights with at least one positive entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct WeightVector<T> {
    weights: BTreeMap<String, T>,
}

impl<T: Scalar> WeightVector<T> {
    pub fn new(weights: impl IntoIterator<Item = (String, T)>) -> Result<Self> {
        let weights: BTreeMap<String, T> = weights.into_iter().collect();
        if let Some((id, w)) = weights.iter().find(|(_, w)| !(w.is_finite() && **w >= T::zero())) {
            return Err(Error::Invalid(format!("weight {w} for model '{id}' must be finite and non-negative")));
        }
        if !weights.values().any(|w| *w > T::zero()) {
            return Err(Error::DegenerateWeights("every weight is zero".into()));
        }
        Ok(WeightVector { weights })
    }

    /// Weight 1 for every id.
    pub fn uniform<'a>(ids: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        Self::new(ids.into_iter().map(|id| (id.to_string(), T::one())))
    }

    pub fn get(&self, model_id: &str) -> Option<T> {
        self.weights.get(model_id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, T)> {
        self.weights.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Fused probabilities and decisions of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult<T> {
    pub class_names: Vec<String>,
    pub fused: IndexMap<String, Vec<T>>,
    pub decisions: IndexMap<String, ClassIndex>,
    /// `None` when the weights were supplied directly to [`wen`].
    pub scheme: Option<WeightScheme>,
    pub weights_used: WeightVector<T>,
}

impl<T: Scalar> EnsembleResult<T> {
    /// The fused vectors as a prediction set, e.g. for writing or evaluation.
    pub fn to_prediction_set(&self, model_id: impl Into<String>) -> PredictionSet<T> {
        PredictionSet::from_trusted(model_id.into(), self.class_names.clone(), self.fused.clone())
    }
}

/// Index of the largest component; ties go to the lowest index.
pub fn decide<T: Scalar>(probs: &[T]) -> Result<ClassIndex> {
    let (first, rest) = probs
        .split_first()
        .ok_or_else(|| Error::Invalid("cannot decide on an empty probability vector".into()))?;
    let mut best = (0, *first);
    for (i, &p) in rest.iter().enumerate() {
        if p > best.1 {
            best = (i + 1, p);
        }
    }
    Ok(ClassIndex(best.0))
}

/// Sorts by model id and checks that the candidates describe the same
/// examples over the same classes.
fn aligned<T: Scalar>(candidates: &[PredictionSet<T>]) -> Result<Vec<&PredictionSet<T>>> {
    if candidates.len() < 2 {
        return Err(Error::Arity(format!(
            "an ensemble needs at least 2 candidates, got {}",
            candidates.len()
        )));
    }
    let mut sorted: Vec<&PredictionSet<T>> = candidates.iter().collect();
    sorted.sort_by(|a, b| a.model_id.cmp(&b.model_id));
    if let Some(w) = sorted.windows(2).find(|w| w[0].model_id == w[1].model_id) {
        return Err(Error::Invalid(format!("duplicate candidate model id '{}'", w[0].model_id)));
    }
    let reference = sorted[0];
    for c in &sorted[1..] {
        if c.class_names != reference.class_names {
            return Err(Error::Alignment(format!(
                "model '{}' has classes {:?}, model '{}' has {:?}",
                c.model_id, c.class_names, reference.model_id, reference.class_names
            )));
        }
        if c.len() != reference.len() {
            return Err(Error::Alignment(format!(
                "model '{}' covers {} examples, model '{}' covers {}",
                c.model_id,
                c.len(),
                reference.model_id,
                reference.len()
            )));
        }
        if let Some(id) = reference.entries.keys().find(|id| !c.entries.contains_key(*id)) {
            return Err(Error::Alignment(format!("model '{}' has no prediction for '{id}'", c.model_id)));
        }
    }
    Ok(sorted)
}

type Fused<T> = (IndexMap<String, Vec<T>>, IndexMap<String, ClassIndex>);

/// Weighted sum per class, normalised by the fused mass. `weights` follows
/// the order of `sorted`.
fn fuse<T: Scalar>(sorted: &[&PredictionSet<T>], weights: &[T]) -> Result<Fused<T>> {
    let n = sorted[0].n_classes();
    let mut fused = IndexMap::with_capacity(sorted[0].len());
    let mut decisions = IndexMap::with_capacity(sorted[0].len());
    for id in sorted[0].entries.keys() {
        let mut acc = vec![T::zero(); n];
        for (cand, &w) in sorted.iter().zip(weights) {
            let p = &cand.entries[id];
            for (a, &pj) in acc.iter_mut().zip(p) {
                *a = *a + w * pj;
            }
        }
        let mass: T = acc.iter().copied().sum();
        acc.iter_mut().for_each(|a| *a = *a / mass);
        decisions.insert(id.clone(), decide(&acc)?);
        fused.insert(id.clone(), acc);
    }
    Ok((fused, decisions))
}

/// Simple average of probabilities over at least two aligned candidates.
pub fn sap<T: Scalar>(candidates: &[PredictionSet<T>]) -> Result<EnsembleResult<T>> {
    let sorted = aligned(candidates)?;
    let ones = vec![T::one(); sorted.len()];
    let (fused, decisions) = fuse(&sorted, &ones)?;
    Ok(EnsembleResult {
        class_names: sorted[0].class_names.clone(),
        fused,
        decisions,
        scheme: Some(WeightScheme::Sap),
        weights_used: WeightVector::uniform(sorted.iter().map(|c| c.model_id()))?,
    })
}

/// Weighted average of probabilities. `weights` must name exactly the
/// candidate models.
pub fn wen<T: Scalar>(candidates: &[PredictionSet<T>], weights: &WeightVector<T>) -> Result<EnsembleResult<T>> {
    fuse_weighted(candidates, weights, None)
}

fn fuse_weighted<T: Scalar>(
    candidates: &[PredictionSet<T>],
    weights: &WeightVector<T>,
    scheme: Option<WeightScheme>,
) -> Result<EnsembleResult<T>> {
    let sorted = aligned(candidates)?;
    let raw = sorted
        .iter()
        .map(|c| {
            weights
                .get(c.model_id())
                .ok_or_else(|| Error::Key(format!("no weight for model '{}'", c.model_id())))
        })
        .collect::<Result<Vec<T>>>()?;
    if let Some((id, _)) = weights.iter().find(|(id, _)| !sorted.iter().any(|c| c.model_id() == *id)) {
        return Err(Error::Key(format!("weight given for unknown model '{id}'")));
    }
    let max = raw.iter().copied().fold(T::zero(), T::max);
    if max <= T::zero() {
        return Err(Error::DegenerateWeights("every weight is zero".into()));
    }
    let scaled: Vec<T> = raw.iter().map(|&w| w / max).collect();
    let (fused, decisions) = fuse(&sorted, &scaled)?;
    Ok(EnsembleResult {
        class_names: sorted[0].class_names.clone(),
        fused,
        decisions,
        scheme,
        weights_used: weights.clone(),
    })
}

/// Weights taken from each model's validation report.
///
/// `Acc`, `Auc`, `F1` (support-weighted) and `Kappa` are supported; negative
/// kappa values become zero.
pub fn derive_weights<T: Scalar>(
    validation_reports: &BTreeMap<String, MetricReport<T>>,
    scheme: WeightScheme,
) -> Result<WeightVector<T>> {
    let pick = |r: &MetricReport<T>| match scheme {
        WeightScheme::Sap => None,
        WeightScheme::Acc => Some(r.acc),
        WeightScheme::Auc => Some(r.auc),
        WeightScheme::F1 => Some(r.wfs),
        WeightScheme::Kappa => Some(r.kappa.max(T::zero())),
    };
    let mut out = Vec::with_capacity(validation_reports.len());
    for (id, report) in validation_reports {
        let w = pick(report)
            .ok_or_else(|| Error::Invalid("the sap scheme does not use metric weights".into()))?;
        if !w.is_finite() {
            return Err(Error::UndefinedMetric(format!("{scheme} is undefined for model '{id}'")));
        }
        out.push((id.clone(), w));
    }
    WeightVector::new(out)
}

/// Derive weights for `scheme` and fuse; `Sap` ignores the reports.
pub fn ensemble<T: Scalar>(
    candidates: &[PredictionSet<T>],
    validation_reports: &BTreeMap<String, MetricReport<T>>,
    scheme: WeightScheme,
) -> Result<EnsembleResult<T>> {
    match scheme {
        WeightScheme::Sap => sap(candidates),
        _ => {
            let w = derive_weights(validation_reports, scheme)?;
            fuse_weighted(candidates, &w, Some(scheme))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evalcore::ConfusionMatrix;
    use crate::rng::SeededRng;
    use proptest::prelude::*;

    fn names() -> Vec<String> {
        vec!["hem".into(), "all".into()]
    }

    fn set(id: &str, rows: &[(&str, Vec<f64>)]) -> PredictionSet<f64> {
        let n = rows[0].1.len();
        let classes = (0..n).map(|i| format!("c{i}")).collect();
        PredictionSet::new(id, classes, rows.iter().map(|(k, v)| (k.to_string(), v.clone()))).unwrap()
    }

    fn random_sets(rng: &mut SeededRng, models: usize, examples: usize, classes: usize) -> Vec<PredictionSet<f64>> {
        (0..models)
            .map(|m| {
                let rows = (0..examples).map(|e| {
                    let raw: Vec<f64> = (0..classes).map(|_| rng.uniform() + 1e-3).collect();
                    let s: f64 = raw.iter().sum();
                    (format!("ex_{e}"), raw.iter().map(|x| x / s).collect())
                });
                let cls = (0..classes).map(|i| format!("c{i}")).collect();
                PredictionSet::new(format!("m{m}"), cls, rows).unwrap()
            })
            .collect()
    }

    fn report(acc: f64, kappa: f64) -> MetricReport<f64> {
        let cm = ConfusionMatrix::from_counts(names(), vec![vec![1, 0], vec![0, 1]]).unwrap();
        MetricReport {
            model_id: String::new(),
            positive_class: "all".into(),
            n_examples: 2,
            wp: acc,
            wr: acc,
            wfs: acc,
            acc,
            ba: acc,
            auc: acc,
            kappa,
            per_class: vec![],
            confusion: cm,
        }
    }

    #[test]
    fn sap_two_models_by_hand() {
        let a = set("a", &[("x", vec![0.8, 0.2])]);
        let b = set("b", &[("x", vec![0.4, 0.6])]);
        let r = sap(&[a, b]).unwrap();
        let v = &r.fused["x"];
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.4).abs() < 1e-15);
        assert_eq!(r.decisions["x"], ClassIndex(0));
    }

    #[test]
    fn wen_three_to_one_by_hand() {
        let a = set("a", &[("x", vec![0.8, 0.2])]);
        let b = set("b", &[("x", vec![0.4, 0.6])]);
        let w = WeightVector::new([("a".to_string(), 3.0), ("b".to_string(), 1.0)]).unwrap();
        let r = wen(&[a, b], &w).unwrap();
        let v = &r.fused["x"];
        assert!((v[0] - 0.7).abs() < 1e-15 && (v[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn identical_candidates_are_idempotent() {
        let mut rng = SeededRng::new(3);
        let base = random_sets(&mut rng, 1, 30, 2).pop().unwrap();
        let cands: Vec<_> = (0..5).map(|i| base.clone().with_model_id(format!("m{i}"))).collect();
        let r = sap(&cands).unwrap();
        for (id, v) in base.entries() {
            for (a, b) in v.iter().zip(&r.fused[id]) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn sap_matches_mean_oracle() {
        let mut rng = SeededRng::new(11);
        let cands = random_sets(&mut rng, 3, 20, 2);
        let r = sap(&cands).unwrap();
        for (id, v) in &r.fused {
            for (j, &got) in v.iter().enumerate() {
                let mean = cands.iter().map(|c| c.get(id).unwrap()[j]).sum::<f64>() / 3.0;
                assert!((got - mean).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scaling_by_two_is_bit_identical() {
        let mut rng = SeededRng::new(5);
        let cands = random_sets(&mut rng, 3, 25, 3);
        let ones = WeightVector::new((0..3).map(|i| (format!("m{i}"), 1.0))).unwrap();
        let twos = WeightVector::new((0..3).map(|i| (format!("m{i}"), 2.0))).unwrap();
        assert_eq!(wen(&cands, &ones).unwrap().fused, wen(&cands, &twos).unwrap().fused);
    }

    #[test]
    fn arity_and_alignment_errors() {
        let a = set("a", &[("x", vec![0.8, 0.2])]);
        assert!(matches!(sap(std::slice::from_ref(&a)), Err(Error::Arity(_))));
        let b = set("b", &[("y", vec![0.4, 0.6])]);
        assert!(matches!(sap(&[a.clone(), b]), Err(Error::Alignment(_))));
        let c = set("c", &[("x", vec![0.4, 0.6]), ("y", vec![0.5, 0.5])]);
        assert!(matches!(sap(&[a.clone(), c]), Err(Error::Alignment(_))));
        let dup = a.clone();
        assert!(sap(&[a, dup]).is_err());
    }

    #[test]
    fn weight_key_errors() {
        let a = set("a", &[("x", vec![0.8, 0.2])]);
        let b = set("b", &[("x", vec![0.4, 0.6])]);
        let missing = WeightVector::new([("a".to_string(), 1.0)]).unwrap();
        assert!(matches!(wen(&[a.clone(), b.clone()], &missing), Err(Error::Key(_))));
        let extra = WeightVector::new([("a".to_string(), 1.0), ("b".to_string(), 1.0), ("z".to_string(), 1.0)]).unwrap();
        assert!(matches!(wen(&[a, b], &extra), Err(Error::Key(_))));
    }

    #[test]
    fn zero_weights_are_degenerate() {
        let w = WeightVector::<f64>::new([("a".to_string(), 0.0), ("b".to_string(), 0.0)]);
        assert!(matches!(w, Err(Error::DegenerateWeights(_))));
        assert!(WeightVector::<f64>::new([("a".to_string(), -1.0)]).is_err());
        assert!(WeightVector::<f64>::new([("a".to_string(), f64::NAN)]).is_err());
    }

    #[test]
    fn derive_acc_weights() {
        let reports: BTreeMap<_, _> = [("m1".to_string(), report(0.859, 0.7)), ("m2".to_string(), report(0.844, 0.6))].into();
        let w = derive_weights(&reports, WeightScheme::Acc).unwrap();
        assert_eq!(w.get("m1"), Some(0.859));
        assert_eq!(w.get("m2"), Some(0.844));
        assert!(derive_weights(&reports, WeightScheme::Sap).is_err());
    }

    #[test]
    fn negative_kappa_clamped() {
        let reports: BTreeMap<_, _> = [("m1".to_string(), report(0.8, 0.5)), ("m2".to_string(), report(0.4, -0.1))].into();
        let w = derive_weights(&reports, WeightScheme::Kappa).unwrap();
        assert_eq!(w.get("m2"), Some(0.0));
        assert_eq!(w.get("m1"), Some(0.5));
    }

    #[test]
    fn equal_metric_weights_match_sap() {
        let mut rng = SeededRng::new(21);
        let cands = random_sets(&mut rng, 5, 40, 2);
        let reports: BTreeMap<_, _> = (0..5).map(|i| (format!("m{i}"), report(0.83, 0.61))).collect();
        let plain = sap(&cands).unwrap();
        for scheme in [WeightScheme::Acc, WeightScheme::Auc, WeightScheme::F1, WeightScheme::Kappa] {
            let r = ensemble(&cands, &reports, scheme).unwrap();
            assert_eq!(r.scheme, Some(scheme));
            assert_eq!(r.fused, plain.fused);
            assert_eq!(r.decisions, plain.decisions);
        }
    }

    #[test]
    fn decide_ties_and_empty() {
        assert_eq!(decide(&[0.7, 0.3]).unwrap(), ClassIndex(0));
        assert_eq!(decide(&[0.5, 0.5]).unwrap(), ClassIndex(0));
        assert_eq!(decide(&[0.1, 0.2, 0.7]).unwrap(), ClassIndex(2));
        assert!(decide::<f64>(&[]).is_err());
    }

    #[test]
    fn normalisation_rules() {
        let mut v = vec![0.3, 0.6999997];
        normalize_probabilities(&mut v, 2).unwrap();
        assert!((v.iter().sum::<f64>() - 1.0).abs() <= f64::EPSILON);
        assert!(normalize_probabilities(&mut [0.9, 0.9], 2).is_err());
        assert!(normalize_probabilities(&mut [1.2, -0.2], 2).is_err());
        assert!(normalize_probabilities(&mut [1.0], 2).is_err());
    }

    #[test]
    fn scheme_parsing() {
        for s in WeightScheme::ALL {
            assert_eq!(s.as_str().parse::<WeightScheme>().unwrap(), s);
        }
        assert!("median".parse::<WeightScheme>().is_err());
    }

    #[test]
    fn works_in_f32() {
        let a = PredictionSet::<f32>::new("a", names(), [("x".to_string(), vec![0.8, 0.2])]).unwrap();
        let b = PredictionSet::<f32>::new("b", names(), [("x".to_string(), vec![0.4, 0.6])]).unwrap();
        let w = WeightVector::new([("a".to_string(), 3.0f32), ("b".to_string(), 1.0)]).unwrap();
        let r = wen(&[a, b], &w).unwrap();
        assert!((r.fused["x"][0] - 0.7).abs() < 1e-6);
    }

    fn instance() -> impl Strategy<Value = (u64, usize, usize, Vec<f64>)> {
        (any::<u64>(), 2usize..6, 2usize..4).prop_flat_map(|(seed, m, c)| {
            (Just(seed), Just(m), Just(c), prop::collection::vec(0.0f64..10.0, m))
        })
    }

    proptest! {
        #[test]
        fn fused_vectors_are_convex_and_normalised((seed, m, c, raw_w) in instance()) {
            prop_assume!(raw_w.iter().any(|w| *w > 0.0));
            let mut rng = SeededRng::new(seed);
            let cands = random_sets(&mut rng, m, 15, c);
            let w = WeightVector::new(raw_w.iter().enumerate().map(|(i, w)| (format!("m{i}"), *w))).unwrap();
            let r = wen(&cands, &w).unwrap();
            for (id, v) in &r.fused {
                prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                for (j, &got) in v.iter().enumerate() {
                    let col: Vec<f64> = cands.iter().map(|s| s.get(id).unwrap()[j]).collect();
                    let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                    let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    prop_assert!(got >= lo - 1e-12 && got <= hi + 1e-12);
                }
                prop_assert_eq!(r.decisions[id], decide(v).unwrap());
            }
        }

        #[test]
        fn scale_and_permutation_invariance((seed, m, c, raw_w) in instance(), scale in 1e-3f64..1e3) {
            prop_assume!(raw_w.iter().any(|w| *w > 0.0));
            let mut rng = SeededRng::new(seed);
            let cands = random_sets(&mut rng, m, 15, c);
            let w = WeightVector::new(raw_w.iter().enumerate().map(|(i, w)| (format!("m{i}"), *w))).unwrap();
            let ws = WeightVector::new(raw_w.iter().enumerate().map(|(i, w)| (format!("m{i}"), *w * scale))).unwrap();
            let base = wen(&cands, &w).unwrap();
            let scaled = wen(&cands, &ws).unwrap();
            for (id, v) in &base.fused {
                for (a, b) in v.iter().zip(&scaled.fused[id]) {
                    prop_assert!((a - b).abs() <= 1e-12);
                }
            }
            let mut rev = cands.clone();
            rev.reverse();
            prop_assert_eq!(wen(&rev, &w).unwrap(), base);
        }

        #[test]
        fn unanimous_argmax_wins((seed, m, c, raw_w) in instance()) {
            prop_assume!(raw_w.iter().any(|w| *w > 0.0));
            let mut rng = SeededRng::new(seed);
            let cands = random_sets(&mut rng, m, 15, c);
            let w = WeightVector::new(raw_w.iter().enumerate().map(|(i, w)| (format!("m{i}"), *w))).unwrap();
            let r = wen(&cands, &w).unwrap();
            for id in r.fused.keys() {
                let votes: Vec<ClassIndex> = cands.iter().map(|s| decide(s.get(id).unwrap()).unwrap()).collect();
                if votes.iter().all(|v| *v == votes[0]) {
                    prop_assert_eq!(r.decisions[id], votes[0]);
                }
            }
        }
    }
}
