use std::fmt;
use std::io::Write;

use indexmap::IndexMap;

use super::LabelTable;
use crate::error::{Error, Result};
use crate::evalcore::ClassIndex;
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assignment {
    Train,
    Validation,
}

impl Assignment {
    pub fn as_str(self) -> &'static str {
        match self {
            Assignment::Train => "train",
            Assignment::Validation => "validation",
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Train/validation assignment of every example.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPlan {
    pub assignments: IndexMap<String, Assignment>,
    pub seed: u64,
    /// Target validation fraction per class.
    pub ratios: Vec<f64>,
}

impl SplitPlan {
    pub fn count(&self, which: Assignment) -> usize {
        self.assignments.values().filter(|a| **a == which).count()
    }

    /// Validation examples per class.
    pub fn validation_counts(&self, labels: &LabelTable) -> Vec<u64> {
        let mut counts = vec![0; labels.n_classes()];
        for (id, a) in &self.assignments {
            if *a == Assignment::Validation {
                counts[labels.class_of(id).expect("plan built from labels").get()] += 1;
            }
        }
        counts
    }

    /// `example_id,assignment` rows in label-table order.
    pub fn write<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["example_id", "assignment"])?;
        for (id, a) in &self.assignments {
            w.write_record([id.as_str(), a.as_str()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Stratified split with one validation fraction for every class.
pub fn stratified_split(labels: &LabelTable, validation_fraction: f64, seed: u64) -> Result<SplitPlan> {
    stratified_split_by_class(labels, &vec![validation_fraction; labels.n_classes()], seed)
}

/// Stratified split with a validation fraction per class.
///
/// Classes are processed in class order from one seeded stream. Each class's
/// members (in table order) are shuffled and the first
/// `round(fraction * n)` become validation examples, clamped so that both
/// sides keep at least one example.
pub fn stratified_split_by_class(labels: &LabelTable, fractions: &[f64], seed: u64) -> Result<SplitPlan> {
    if fractions.len() != labels.n_classes() {
        return Err(Error::Invalid(format!(
            "{} fractions given for {} classes",
            fractions.len(),
            labels.n_classes()
        )));
    }
    if let Some(f) = fractions.iter().find(|f| !(**f > 0.0 && **f < 1.0)) {
        return Err(Error::Invalid(format!("validation fraction {f} must lie strictly between 0 and 1")));
    }
    let mut rng = SeededRng::new(seed);
    let mut validation = std::collections::HashSet::new();
    for (c, &frac) in fractions.iter().enumerate() {
        let mut members = labels.members(ClassIndex(c));
        let n = members.len();
        if n < 2 {
            return Err(Error::Invalid(format!(
                "class '{}' has {n} example(s); stratification needs at least 2",
                labels.class_names()[c]
            )));
        }
        let k = ((frac * n as f64).round() as usize).clamp(1, n - 1);
        rng.shuffle(&mut members);
        validation.extend(members[..k].iter().copied());
    }
    let assignments = labels
        .ids()
        .map(|id| {
            let a = if validation.contains(id) {
                Assignment::Validation
            } else {
                Assignment::Train
            };
            (id.to_string(), a)
        })
        .collect();
    Ok(SplitPlan {
        assignments,
        seed,
        ratios: fractions.to_vec(),
    })
}
