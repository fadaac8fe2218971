//! Floating-point abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used for probabilities, metrics and learning rates.
///
/// Implemented for `f32` and `f64`. Counts are kept as integers and only
/// converted at the final division, so the choice of scalar affects rounding
/// of results but never the tallies themselves.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Lossy conversion from an integer count.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable by every float type")
    }

    /// Lossy conversion from `f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable by every float type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }

    /// Ratio of two counts; `0` when the denominator is zero.
    fn ratio(num: u64, den: u64) -> Self {
        if den == 0 {
            Self::zero()
        } else {
            Self::from_count(num) / Self::from_count(den)
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
