//! Metric-weighted soft-voting ensembles for probabilistic classifiers.
//!
//! The crate computes the usual classification metrics from per-model
//! probability outputs ([`evalcore`]), fuses several models either by simple
//! probability averaging or by weighting each model with one of its
//! validation metrics ([`ensemble`]), and ships the supporting pieces of a
//! training pipeline: label/prediction file handling with stratified splits
//! and random oversampling ([`datapipe`]), center cropping and geometric
//! augmentation ([`pixproc`]), a halving triangular cyclic learning-rate
//! schedule ([`lrsched`]) and synthetic fixtures with brute-force reference
//! metrics ([`synthlab`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the command-line tool uses.

pub mod datapipe;
pub mod ensemble;
pub mod error;
pub mod evalcore;
pub mod lrsched;
pub mod pixproc;
pub mod rng;
pub mod scalar;
pub mod synthlab;

pub use datapipe::LabelTable;
pub use error::{Error, ErrorKind, Result};
pub use evalcore::{ClassIndex, ConfusionMatrix};
pub use scalar::Scalar;

pub type PredictionSet = ensemble::PredictionSet<f64>;
pub type PredictionSet32 = ensemble::PredictionSet<f32>;
pub type MetricReport = evalcore::MetricReport<f64>;
pub type MetricReport32 = evalcore::MetricReport<f32>;
pub type PerClassStats = evalcore::PerClassStats<f64>;
pub type ScoredExample = evalcore::ScoredExample<f64>;
pub type RocPoint = evalcore::RocPoint<f64>;
pub type WeightVector = ensemble::WeightVector<f64>;
pub type EnsembleResult = ensemble::EnsembleResult<f64>;
pub type LrScheduleConfig = lrsched::LrScheduleConfig<f64>;
pub type LrScheduleConfig32 = lrsched::LrScheduleConfig<f32>;
