use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::datapipe::LabelTable;
use crate::error::{Error, Result};

/// Ordinal into an ordered class list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassIndex(pub usize);

impl ClassIndex {
    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for ClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Square count grid, rows = actual class, columns = predicted class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    class_names: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    /// Zero matrix over `class_names`.
    pub fn zeros(class_names: Vec<String>) -> Self {
        let n = class_names.len();
        ConfusionMatrix {
            class_names,
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn from_counts(class_names: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = class_names.len();
        if n == 0 {
            return Err(Error::Invalid("confusion matrix needs at least one class".into()));
        }
        if counts.len() != n || counts.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid(format!(
                "confusion matrix must be {n}x{n} to match the class list"
            )));
        }
        Ok(ConfusionMatrix { class_names, counts })
    }

    /// Convenience constructor with generated class names `c0, c1, ...`.
    pub fn from_grid(counts: Vec<Vec<u64>>) -> Result<Self> {
        let names = (0..counts.len()).map(|i| format!("c{i}")).collect();
        Self::from_counts(names, counts)
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn get(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual][predicted]
    }

    pub fn record(&mut self, actual: ClassIndex, predicted: ClassIndex) {
        self.counts[actual.0][predicted.0] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    /// Actual examples of class `c` (its support).
    pub fn row_sum(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }

    /// Examples predicted as class `c`.
    pub fn col_sum(&self, c: usize) -> u64 {
        self.counts.iter().map(|row| row[c]).sum()
    }

    pub(crate) fn check_class(&self, c: ClassIndex) -> Result<()> {
        if c.0 >= self.n_classes() {
            return Err(Error::Invalid(format!(
                "class index {c} out of range for {} classes",
                self.n_classes()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_nonempty(&self) -> Result<u64> {
        match self.total() {
            0 => Err(Error::UndefinedMetric("confusion matrix has no examples".into())),
            n => Ok(n),
        }
    }
}

/// Tally `decisions` against `labels`.
///
/// Every decision must refer to a labelled example, and every labelled
/// example must have a decision.
pub fn build_confusion(
    labels: &LabelTable,
    decisions: &IndexMap<String, ClassIndex>,
) -> Result<ConfusionMatrix> {
    let mut cm = ConfusionMatrix::zeros(labels.class_names().to_vec());
    for (id, &predicted) in decisions {
        let actual = labels
            .class_of(id)
            .ok_or_else(|| Error::Alignment(format!("example '{id}' has no label")))?;
        cm.check_class(predicted)
            .map_err(|_| Error::Alignment(format!("example '{id}' predicted unknown class {predicted}")))?;
        cm.record(actual, predicted);
    }
    if decisions.len() != labels.len() {
        let missing = labels
            .ids()
            .find(|id| !decisions.contains_key(*id))
            .unwrap_or_default();
        return Err(Error::Coverage(format!(
            "{} labelled examples lack a decision (first: '{missing}')",
            labels.len() - decisions.len()
        )));
    }
    Ok(cm)
}
