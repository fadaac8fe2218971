use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::confusion::{build_confusion, ClassIndex, ConfusionMatrix};
use super::metrics::{
    accuracy, balanced_accuracy, cohens_kappa, per_class_stats, weighted_f1, weighted_precision,
    weighted_recall, PerClassStats,
};
use super::roc::{roc_auc, ScoredExample};
use crate::datapipe::LabelTable;
use crate::ensemble::{decide, PredictionSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The full metric bundle for one model on one labelled split.
///
/// Values are kept at full precision; [`MetricReport::to_table`] renders
/// them to three decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MetricReport<T> {
    pub model_id: String,
    pub positive_class: String,
    pub n_examples: u64,
    pub wp: T,
    pub wr: T,
    pub wfs: T,
    pub acc: T,
    pub ba: T,
    pub auc: T,
    pub kappa: T,
    /// Indexed like `confusion.class_names()`.
    pub per_class: Vec<PerClassStats<T>>,
    pub confusion: ConfusionMatrix,
}

impl<T: Scalar> MetricReport<T> {
    /// `(name, value)` pairs in the column order WP, WR, WFS, ACC, BA, AUC, KAPPA.
    pub fn metrics(&self) -> [(&'static str, T); 7] {
        [
            ("WP", self.wp),
            ("WR", self.wr),
            ("WFS", self.wfs),
            ("ACC", self.acc),
            ("BA", self.ba),
            ("AUC", self.auc),
            ("KAPPA", self.kappa),
        ]
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model: {}  (n = {}, positive = {})", self.model_id, self.n_examples, self.positive_class);
        for (name, v) in self.metrics() {
            let _ = writeln!(out, "{name:<6}{:.3}", v.as_f64());
        }
        out
    }
}

/// Argmax decision for every example of `probs`, in its entry order.
pub fn decisions_from<T: Scalar>(probs: &PredictionSet<T>) -> Result<IndexMap<String, ClassIndex>> {
    probs
        .entries()
        .iter()
        .map(|(id, v)| Ok((id.clone(), decide(v)?)))
        .collect()
}

/// Evaluate one model's probabilities against `labels`.
///
/// Decisions are argmax with ties to the lowest class index; AUC is taken on
/// the probability of `positive`.
pub fn metric_report<T: Scalar>(
    labels: &LabelTable,
    probs: &PredictionSet<T>,
    positive: ClassIndex,
) -> Result<MetricReport<T>> {
    if probs.class_names() != labels.class_names() {
        return Err(Error::Alignment(format!(
            "prediction classes {:?} differ from label classes {:?}",
            probs.class_names(),
            labels.class_names()
        )));
    }
    if positive.get() >= labels.n_classes() {
        return Err(Error::Invalid(format!("positive class index {positive} out of range")));
    }
    let decisions = decisions_from(probs)?;
    let cm = build_confusion(labels, &decisions)?;

    let scored: Vec<ScoredExample<T>> = labels
        .iter()
        .map(|(id, actual)| {
            let v = probs.get(id).expect("coverage checked by build_confusion");
            ScoredExample::new(id, v[positive.get()], actual == positive)
        })
        .collect();

    let per_class = (0..cm.n_classes())
        .map(|c| per_class_stats(&cm, ClassIndex(c)))
        .collect::<Result<Vec<_>>>()?;

    Ok(MetricReport {
        model_id: probs.model_id().to_string(),
        positive_class: labels.class_names()[positive.get()].clone(),
        n_examples: cm.total(),
        wp: weighted_precision(&cm)?,
        wr: weighted_recall(&cm)?,
        wfs: weighted_f1(&cm)?,
        acc: accuracy(&cm)?,
        ba: balanced_accuracy(&cm)?,
        auc: roc_auc(&scored)?,
        kappa: cohens_kappa(&cm)?,
        per_class,
        confusion: cm,
    })
}
