use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A positive-class score with its binary ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ScoredExample<T> {
    pub example_id: String,
    pub score: T,
    pub label: bool,
}

impl<T: Scalar> ScoredExample<T> {
    pub fn new(example_id: impl Into<String>, score: T, label: bool) -> Self {
        ScoredExample {
            example_id: example_id.into(),
            score,
            label,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RocPoint<T> {
    pub fpr: T,
    pub tpr: T,
}

/// Checks that every score is finite and in `[0, 1]` and that both labels
/// occur. Returns `(positives, negatives)`.
pub fn validate_scores<T: Scalar>(scored: &[ScoredExample<T>]) -> Result<(u64, u64)> {
    let mut pos = 0;
    for s in scored {
        if !(s.score >= T::zero() && s.score <= T::one()) {
            return Err(Error::Invalid(format!(
                "score {} for '{}' is not a probability",
                s.score, s.example_id
            )));
        }
        pos += s.label as u64;
    }
    let neg = scored.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::UndefinedMetric(
            "ROC needs at least one positive and one negative example".into(),
        ));
    }
    Ok((pos, neg))
}

/// ROC curve swept over the distinct score values in descending order.
///
/// Tied scores move both coordinates in one step. The curve starts at
/// `(0, 0)` and ends at `(1, 1)`.
pub fn roc_points<T: Scalar>(scored: &[ScoredExample<T>]) -> Result<Vec<RocPoint<T>>> {
    let (pos, neg) = validate_scores(scored)?;
    let mut order: Vec<&ScoredExample<T>> = scored.iter().collect();
    order.sort_by(|a, b| b.score.partial_cmp(&a.score).expect("scores validated"));

    let mut points = Vec::with_capacity(order.len() + 1);
    points.push(RocPoint {
        fpr: T::zero(),
        tpr: T::zero(),
    });
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let threshold = order[i].score;
        while i < order.len() && order[i].score == threshold {
            if order[i].label {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: T::ratio(fp, neg),
            tpr: T::ratio(tp, pos),
        });
    }
    Ok(points)
}

/// Trapezoidal area under [`roc_points`].
pub fn roc_auc<T: Scalar>(scored: &[ScoredExample<T>]) -> Result<T> {
    let points = roc_points(scored)?;
    let half = T::lit(0.5);
    Ok(points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) * half)
        .sum())
}
