//! Confusion matrices and the classification metrics derived from them.
//!
//! Everything here is a pure function of its inputs. Tallies are integers;
//! the scalar type parameter only decides the precision of the final ratios.

mod confusion;
mod metrics;
mod report;
mod roc;

pub use confusion::{build_confusion, ClassIndex, ConfusionMatrix};
pub use metrics::{
    accuracy, balanced_accuracy, cohens_kappa, per_class_stats, weighted_f1, weighted_precision,
    weighted_recall, PerClassStats,
};
pub use report::{decisions_from, metric_report, MetricReport};
pub use roc::{roc_auc, roc_points, validate_scores, RocPoint, ScoredExample};
