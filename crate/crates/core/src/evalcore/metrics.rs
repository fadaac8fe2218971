use serde::{Deserialize, Serialize};

use super::confusion::{ClassIndex, ConfusionMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Precision, recall and F1 of one class, with its support.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PerClassStats<T> {
    pub precision: T,
    pub recall: T,
    pub f1: T,
    pub support: u64,
}

/// Per-class statistics. Zero denominators give zero, and F1 is zero
/// whenever precision and recall are both zero.
pub fn per_class_stats<T: Scalar>(cm: &ConfusionMatrix, c: ClassIndex) -> Result<PerClassStats<T>> {
    cm.check_class(c)?;
    let i = c.get();
    let tp = cm.get(i, i);
    let support = cm.row_sum(i);
    let precision = T::ratio(tp, cm.col_sum(i));
    let recall = T::ratio(tp, support);
    let denom = precision + recall;
    let f1 = if denom == T::zero() {
        T::zero()
    } else {
        T::lit(2.0) * precision * recall / denom
    };
    Ok(PerClassStats {
        precision,
        recall,
        f1,
        support,
    })
}

fn all_stats<T: Scalar>(cm: &ConfusionMatrix) -> Vec<PerClassStats<T>> {
    (0..cm.n_classes())
        .map(|c| per_class_stats(cm, ClassIndex(c)).expect("index in range"))
        .collect()
}

fn support_weighted<T: Scalar>(cm: &ConfusionMatrix, pick: impl Fn(&PerClassStats<T>) -> T) -> Result<T> {
    let total = cm.check_nonempty()?;
    let acc: T = all_stats(cm)
        .iter()
        .map(|s| T::from_count(s.support) * pick(s))
        .sum();
    Ok(acc / T::from_count(total))
}

/// Support-weighted mean of per-class F1.
pub fn weighted_f1<T: Scalar>(cm: &ConfusionMatrix) -> Result<T> {
    support_weighted(cm, |s| s.f1)
}

pub fn weighted_precision<T: Scalar>(cm: &ConfusionMatrix) -> Result<T> {
    support_weighted(cm, |s| s.precision)
}

/// Support-weighted recall. Algebraically this is trace/total, and it is
/// computed that way so it is bit-identical to [`accuracy`].
pub fn weighted_recall<T: Scalar>(cm: &ConfusionMatrix) -> Result<T> {
    accuracy(cm)
}

pub fn accuracy<T: Scalar>(cm: &ConfusionMatrix) -> Result<T> {
    let total = cm.check_nonempty()?;
    Ok(T::ratio(cm.trace(), total))
}

/// Mean of per-class recalls. For two classes this is
/// `(specificity + sensitivity) / 2`.
pub fn balanced_accuracy<T: Scalar>(cm: &ConfusionMatrix) -> Result<T> {
    cm.check_nonempty()?;
    let n = cm.n_classes();
    let mut sum = T::zero();
    for c in 0..n {
        let support = cm.row_sum(c);
        if support == 0 {
            return Err(Error::UndefinedMetric(format!(
                "balanced accuracy: class '{}' has no actual examples",
                cm.class_names()[c]
            )));
        }
        sum = sum + T::ratio(cm.get(c, c), support);
    }
    Ok(sum / T::from_count(n as u64))
}

/// Cohen's kappa, `(p_o - p_e) / (1 - p_e)`.
///
/// Evaluated as `(N*trace - S) / (N^2 - S)` with `S = sum(row_i * col_i)`
/// in exact integer arithmetic, so a perfect diagonal gives exactly 1.
pub fn cohens_kappa<T: Scalar>(cm: &ConfusionMatrix) -> Result<T> {
    let total = cm.check_nonempty()? as i128;
    let chance: i128 = (0..cm.n_classes())
        .map(|c| cm.row_sum(c) as i128 * cm.col_sum(c) as i128)
        .sum();
    let den = total * total - chance;
    if den == 0 {
        return Err(Error::UndefinedMetric(
            "kappa: expected agreement is 1 (all mass in one class)".into(),
        ));
    }
    let num = total * cm.trace() as i128 - chance;
    Ok(T::from_i128(num).unwrap() / T::from_i128(den).unwrap())
}
