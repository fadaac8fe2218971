use std::io::Write;

use indexmap::IndexMap;

use super::LabelTable;
use crate::error::{Error, Result};
use crate::evalcore::ClassIndex;
use crate::rng::SeededRng;

/// Copy count of every example after random oversampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OversamplePlan {
    pub replications: IndexMap<String, u64>,
    pub seed: u64,
}

impl OversamplePlan {
    /// Total copies per class after applying the plan.
    pub fn class_totals(&self, labels: &LabelTable) -> Vec<u64> {
        let mut totals = vec![0; labels.n_classes()];
        for (id, n) in &self.replications {
            totals[labels.class_of(id).expect("plan built from labels").get()] += n;
        }
        totals
    }

    pub fn total(&self) -> u64 {
        self.replications.values().sum()
    }

    /// `example_id,copy_count` rows in label-table order.
    pub fn write<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["example_id", "copy_count"])?;
        for (id, n) in &self.replications {
            w.write_record([id.clone(), n.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Random oversampling to the majority class size.
///
/// Every example keeps one copy. Each smaller class then receives
/// `majority - size` extra copies, each drawn uniformly with replacement
/// from that class's members. Classes are visited in class order from a
/// single seeded stream.
pub fn oversample_plan(labels: &LabelTable, seed: u64) -> Result<OversamplePlan> {
    if labels.n_classes() < 2 {
        return Err(Error::Invalid("oversampling needs at least two classes".into()));
    }
    let counts = labels.class_counts();
    let majority = *counts.iter().max().expect("at least two classes");
    let mut replications: IndexMap<String, u64> = labels.ids().map(|id| (id.to_string(), 1)).collect();
    let mut rng = SeededRng::new(seed);
    for (c, &n) in counts.iter().enumerate() {
        if n == majority {
            continue;
        }
        if n == 0 {
            return Err(Error::Invalid(format!(
                "class '{}' has no examples to replicate",
                labels.class_names()[c]
            )));
        }
        let members = labels.members(ClassIndex(c));
        for _ in 0..majority - n {
            let pick = members[rng.below(n) as usize];
            replications[pick] += 1;
        }
    }
    Ok(OversamplePlan { replications, seed })
}
