//! Triangular cyclic learning rate whose amplitude halves every cycle
//! ("triangular2").
//!
//! With step size `s`, iteration `i` lies in cycle `c = 1 + i / (2s)`; the
//! rate rises linearly from the base rate to the cycle peak over `s`
//! iterations and falls back over the next `s`. The peak of cycle `c` is
//! `base + (max - base) / 2^(c-1)`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Lower rate boundary used for training the candidate networks.
pub const DEFAULT_BASE_RATE: f64 = 1e-7;
/// Upper rate boundary used for training the candidate networks.
pub const DEFAULT_MAX_RATE: f64 = 2e-3;
/// Half-cycle length in epochs.
pub const STEP_EPOCHS: u64 = 6;

/// Adamax settings the candidates were trained with. Documentation only.
pub mod adamax {
    pub const INITIAL_RATE: f64 = 2e-4;
    pub const BETA1: f64 = 0.9;
    pub const BETA2: f64 = 0.999;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LrScheduleConfig<T> {
    pub base_rate: T,
    pub max_rate: T,
    /// Iterations per half cycle.
    pub step_size: u64,
}

impl<T: Scalar> LrScheduleConfig<T> {
    pub fn new(base_rate: T, max_rate: T, step_size: u64) -> Result<Self> {
        if !(base_rate > T::zero() && base_rate < max_rate && max_rate.is_finite()) {
            return Err(Error::Invalid(format!(
                "need 0 < base_rate < max_rate, got {base_rate} and {max_rate}"
            )));
        }
        if step_size == 0 {
            return Err(Error::Invalid("step_size must be at least 1".into()));
        }
        Ok(LrScheduleConfig {
            base_rate,
            max_rate,
            step_size,
        })
    }

    /// Step size of [`STEP_EPOCHS`] epochs.
    pub fn from_epochs(base_rate: T, max_rate: T, iters_per_epoch: u64) -> Result<Self> {
        Self::new(base_rate, max_rate, STEP_EPOCHS * iters_per_epoch)
    }

    /// The default boundaries with the given step size.
    pub fn with_default_rates(step_size: u64) -> Result<Self> {
        Self::new(T::lit(DEFAULT_BASE_RATE), T::lit(DEFAULT_MAX_RATE), step_size)
    }

    /// One-based cycle containing `iteration`.
    pub fn cycle(&self, iteration: u64) -> u64 {
        1 + iteration / (2 * self.step_size)
    }

    /// Peak rate of the one-based `cycle`.
    pub fn peak(&self, cycle: u64) -> T {
        self.base_rate + (self.max_rate - self.base_rate) / halving(cycle)
    }
}

fn halving<T: Scalar>(cycle: u64) -> T {
    // Beyond ~1100 halvings the amplitude is zero in every float type.
    T::lit(2.0).powi((cycle - 1).min(2000) as i32)
}

/// Learning rate at `iteration`.
///
/// The triangle position `|i/s - 2c + 1|` is formed from integers and divided
/// once, so rates at multiples of the step size are exact.
pub fn lr_at<T: Scalar>(iteration: u64, cfg: &LrScheduleConfig<T>) -> T {
    let cycle = cfg.cycle(iteration);
    let pivot = (2 * cycle - 1) as u128 * cfg.step_size as u128;
    let dist = (iteration as u128).abs_diff(pivot);
    let x = T::from_u128(dist).unwrap() / T::from_count(cfg.step_size);
    let rise = (T::one() - x).max(T::zero());
    cfg.base_rate + (cfg.max_rate - cfg.base_rate) * rise / halving(cycle)
}

/// `(iteration, rate)` for iterations `0..total_iterations`.
pub fn schedule<T: Scalar>(cfg: &LrScheduleConfig<T>, total_iterations: u64) -> Result<Vec<(u64, T)>> {
    if total_iterations == 0 {
        return Err(Error::Invalid("total_iterations must be at least 1".into()));
    }
    Ok((0..total_iterations).map(|i| (i, lr_at(i, cfg))).collect())
}

/// Writes an `iteration,rate` table.
pub fn write_schedule<T: Scalar, W: Write>(series: &[(u64, T)], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["iteration", "rate"])?;
    for (i, r) in series {
        w.write_record([i.to_string(), r.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
