//! Synthetic labels and scorers standing in for trained networks, plus
//! brute-force reference implementations of the metrics.
//!
//! # Score model
//!
//! For a scorer of separation `a >= 1`, positive-class scores follow the CDF
//! `x^a` on `[0, 1]` and negative-class scores the mirrored CDF
//! `1 - (1 - x)^a`. Both are unimodal; `a = 1` is uniform noise. Their
//! population AUC is
//!
//! ```text
//! AUC(a) = 1 - Γ(a + 1)² / Γ(2a + 1)
//! ```
//!
//! which increases monotonically from 1/2 at `a = 1` towards 1. A target
//! skill is converted to `a` by bisection on that curve. Scores are drawn by
//! inversion from one uniform per example (`u^(1/a)` for positives,
//! `1 - u^(1/a)` for negatives), so for fixed labels and seed every score
//! moves monotonically with the skill. Skill exactly 1 puts positives in
//! `(1/2, 1]` and negatives in `[0, 1/2)`.
//!
//! Each predictor draws from the stream `stream_seed(seed, model_id)`, which
//! makes predictors with distinct ids conditionally independent.

use indexmap::IndexMap;
use statrs::function::gamma::ln_gamma;

use crate::datapipe::LabelTable;
use crate::ensemble::PredictionSet;
use crate::error::{Error, Result};
use crate::evalcore::{ClassIndex, ScoredExample};
use crate::rng::{stream_seed, SeededRng};
use crate::scalar::Scalar;

/// Class names of generated tables, negative first.
pub const CLASS_NAMES: [&str; 2] = ["hem", "all"];
/// Index of the positive class in [`CLASS_NAMES`].
pub const POSITIVE: ClassIndex = ClassIndex(1);

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPredictorSpec {
    pub model_id: String,
    /// Target AUC in `[0.5, 1]`.
    pub skill: f64,
    pub seed: u64,
}

impl SyntheticPredictorSpec {
    pub fn new(model_id: impl Into<String>, skill: f64, seed: u64) -> Self {
        SyntheticPredictorSpec {
            model_id: model_id.into(),
            skill,
            seed,
        }
    }
}

/// Population AUC of the score model with separation `a`.
pub fn separation_auc(a: f64) -> f64 {
    1.0 - (2.0 * ln_gamma(a + 1.0) - ln_gamma(2.0 * a + 1.0)).exp()
}

/// Separation whose population AUC equals `skill`, for `skill` in `[0.5, 1)`.
pub fn separation_for(skill: f64) -> f64 {
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while separation_auc(hi) < skill {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if separation_auc(mid) < skill {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn example_id(i: usize, total: usize) -> String {
    let width = total.to_string().len().max(4);
    format!("ex_{:0width$}", i + 1)
}

/// Labels `ex_0001, ex_0002, ...` with exactly `n_positive` examples of the
/// positive class, placed at seeded random positions.
pub fn gen_ground_truth(n_positive: usize, n_negative: usize, seed: u64) -> Result<LabelTable> {
    let total = n_positive + n_negative;
    if total == 0 {
        return Err(Error::Invalid("ground truth needs at least one example".into()));
    }
    let mut classes: Vec<usize> = std::iter::repeat_n(POSITIVE.get(), n_positive)
        .chain(std::iter::repeat_n(1 - POSITIVE.get(), n_negative))
        .collect();
    SeededRng::new(seed).shuffle(&mut classes);
    let rows = classes
        .into_iter()
        .enumerate()
        .map(|(i, c)| (example_id(i, total), CLASS_NAMES[c].to_string()));
    LabelTable::from_rows(rows, Some(CLASS_NAMES.map(String::from).to_vec()))
}

/// Binary probability vectors whose positive-class score has the AUC of
/// `spec.skill` in expectation.
pub fn gen_predictor<T: Scalar>(
    labels: &LabelTable,
    positive: ClassIndex,
    spec: &SyntheticPredictorSpec,
) -> Result<PredictionSet<T>> {
    if labels.n_classes() != 2 {
        return Err(Error::Invalid(format!(
            "synthetic predictors need binary labels, found {} classes",
            labels.n_classes()
        )));
    }
    if positive.get() > 1 {
        return Err(Error::Invalid(format!("positive class index {positive} out of range")));
    }
    if !(0.5..=1.0).contains(&spec.skill) {
        return Err(Error::Invalid(format!("skill {} must lie in [0.5, 1]", spec.skill)));
    }
    let mut rng = SeededRng::new(stream_seed(spec.seed, &spec.model_id));
    let perfect = spec.skill >= 1.0;
    let inv = if perfect { 1.0 } else { 1.0 / separation_for(spec.skill) };
    let mut entries = IndexMap::with_capacity(labels.len());
    for (id, class) in labels.iter() {
        let u = rng.uniform();
        let is_pos = class == positive;
        let score = match (perfect, is_pos) {
            (true, true) => 1.0 - 0.5 * u,
            (true, false) => 0.5 * u,
            (false, true) => u.powf(inv),
            (false, false) => 1.0 - u.powf(inv),
        };
        let s = T::lit(score);
        let mut v = vec![T::one() - s; 2];
        v[positive.get()] = s;
        entries.insert(id.to_string(), v);
    }
    Ok(PredictionSet::from_trusted(
        spec.model_id.clone(),
        labels.class_names().to_vec(),
        entries,
    ))
}

/// AUC by enumerating every positive/negative pair; ties count one half.
pub fn oracle_auc<T: Scalar>(scored: &[ScoredExample<T>]) -> Result<f64> {
    let pos: Vec<f64> = scored.iter().filter(|s| s.label).map(|s| s.score.as_f64()).collect();
    let neg: Vec<f64> = scored.iter().filter(|s| !s.label).map(|s| s.score.as_f64()).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::UndefinedMetric("need both positive and negative examples".into()));
    }
    let mut half_wins: u64 = 0;
    for p in &pos {
        for n in &neg {
            half_wins += if p > n { 2 } else if p == n { 1 } else { 0 };
        }
    }
    Ok(half_wins as f64 / (2 * pos.len() * neg.len()) as f64)
}

/// Reference metric values computed by direct per-example tallies.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub accuracy: f64,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub f1: Vec<f64>,
    pub support: Vec<u64>,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub balanced_accuracy: f64,
    pub kappa: f64,
}

/// Naive metrics for `decisions` (one per labelled example).
pub fn oracle_metrics(labels: &LabelTable, decisions: &IndexMap<String, ClassIndex>) -> Result<OracleMetrics> {
    let k = labels.n_classes();
    let mut pairs = Vec::with_capacity(labels.len());
    for (id, actual) in labels.iter() {
        let predicted = decisions
            .get(id)
            .ok_or_else(|| Error::Coverage(format!("no decision for '{id}'")))?;
        pairs.push((actual.get(), predicted.get()));
    }
    let n = pairs.len() as f64;
    if pairs.is_empty() {
        return Err(Error::UndefinedMetric("no examples".into()));
    }
    let correct = pairs.iter().filter(|(a, p)| a == p).count() as f64;
    let (mut precision, mut recall, mut f1, mut support) = (vec![], vec![], vec![], vec![]);
    for c in 0..k {
        let tp = pairs.iter().filter(|&&(a, p)| a == c && p == c).count() as f64;
        let predicted = pairs.iter().filter(|&&(_, p)| p == c).count() as f64;
        let actual = pairs.iter().filter(|&&(a, _)| a == c).count();
        let pr = if predicted > 0.0 { tp / predicted } else { 0.0 };
        let re = if actual > 0 { tp / actual as f64 } else { 0.0 };
        precision.push(pr);
        recall.push(re);
        f1.push(if pr + re > 0.0 { 2.0 * pr * re / (pr + re) } else { 0.0 });
        support.push(actual as u64);
    }
    let wmean = |v: &[f64]| v.iter().zip(&support).map(|(x, s)| x * *s as f64).sum::<f64>() / n;
    let present: Vec<usize> = (0..k).filter(|&c| support[c] > 0).collect();
    let balanced_accuracy = if present.len() == k {
        recall.iter().sum::<f64>() / k as f64
    } else {
        f64::NAN
    };
    let p_o = correct / n;
    let p_e: f64 = (0..k)
        .map(|c| {
            let a = pairs.iter().filter(|&&(x, _)| x == c).count() as f64;
            let p = pairs.iter().filter(|&&(_, y)| y == c).count() as f64;
            (a / n) * (p / n)
        })
        .sum();
    Ok(OracleMetrics {
        accuracy: p_o,
        weighted_precision: wmean(&precision),
        weighted_recall: wmean(&recall),
        weighted_f1: wmean(&f1),
        balanced_accuracy,
        kappa: (p_o - p_e) / (1.0 - p_e),
        precision,
        recall,
        f1,
        support,
    })
}
