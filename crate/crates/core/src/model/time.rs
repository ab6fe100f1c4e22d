use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StepMode<T> {
    Fixed,
    /// CFL-limited stepping; every accepted step is at most `safety` times
    /// the stability bound of the state it starts from.
    Adaptive { safety: T },
}

/// Time-marching controls.
///
/// In fixed mode `dt` is the scheme step. In adaptive mode `dt` is the
/// synchronisation interval: sub-steps are chosen from the CFL bound and
/// always land on multiples of `dt`, so stored layers sit on a uniform grid.
/// Every `decimation`-th layer of that grid is stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeControls<T> {
    pub dt: T,
    pub horizon: T,
    #[serde(default = "fixed_mode")]
    pub mode: StepMode<T>,
    #[serde(default = "one")]
    pub decimation: usize,
}

fn fixed_mode<T>() -> StepMode<T> {
    StepMode::Fixed
}

fn one() -> usize {
    1
}

pub const DEFAULT_SAFETY: f64 = 0.9;

impl<T: Real> TimeControls<T> {
    pub fn fixed(dt: T, horizon: T) -> Self {
        Self { dt, horizon, mode: StepMode::Fixed, decimation: 1 }
    }

    pub fn adaptive(sync: T, horizon: T, safety: T) -> Self {
        Self { dt: sync, horizon, mode: StepMode::Adaptive { safety }, decimation: 1 }
    }

    pub fn with_decimation(mut self, k: usize) -> Self {
        self.decimation = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(invalid("time.dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.horizon > T::zero()) || !self.horizon.is_finite() {
            return Err(invalid("time.horizon", format!("must be positive, got {}", self.horizon)));
        }
        if self.dt > self.horizon {
            return Err(invalid("time.dt", format!("{} exceeds horizon {}", self.dt, self.horizon)));
        }
        if self.decimation == 0 {
            return Err(invalid("time.decimation", "must be at least 1"));
        }
        if let StepMode::Adaptive { safety } = self.mode {
            if !(safety > T::zero() && safety <= T::one()) {
                return Err(invalid("time.mode.safety", format!("must lie in (0, 1], got {safety}")));
            }
        }
        Ok(())
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self.mode, StepMode::Adaptive { .. })
    }

    /// Times of the uniform layer grid `0, dt, 2 dt, ..., horizon` (last one clamped).
    pub fn layer_count(&self) -> usize {
        let n = (self.horizon / self.dt).to_f64().unwrap_or(0.0);
        let r = n.round();
        // tolerate round-off in horizon / dt
        if (n - r).abs() < 1e-9 * r.max(1.0) {
            r as usize
        } else {
            n.ceil() as usize
        }
    }

    pub fn layer_time(&self, n: usize) -> T {
        let steps = self.layer_count();
        if n >= steps {
            self.horizon
        } else {
            T::count(n) * self.dt
        }
    }

    /// Stamps of the stored layers: every `decimation`-th layer plus the horizon.
    pub fn stored_times(&self) -> Vec<T> {
        let layers = self.layer_count();
        (0..=layers).filter(|&k| k % self.decimation.max(1) == 0 || k == layers).map(|k| self.layer_time(k)).collect()
    }
}
