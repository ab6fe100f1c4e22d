use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PecletSegment<T> {
    pub start: T,
    pub end: T,
    pub value: T,
}

/// Péclet number as a function of time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PecletModel<T> {
    Constant(T),
    Piecewise(Vec<PecletSegment<T>>),
}

impl<T: Real> PecletModel<T> {
    /// Piecewise model from segment boundaries `t_0 < t_1 < ... < t_k` and `k` values.
    pub fn piecewise(boundaries: &[T], values: &[T]) -> Result<Self> {
        if boundaries.len() < 2 || values.len() + 1 != boundaries.len() {
            return Err(invalid(
                "peclet.segments",
                format!("{} boundaries need {} values, got {}", boundaries.len(), boundaries.len().saturating_sub(1), values.len()),
            ));
        }
        let segs = boundaries
            .windows(2)
            .zip(values)
            .map(|(w, &value)| PecletSegment { start: w[0], end: w[1], value })
            .collect();
        Ok(PecletModel::Piecewise(segs))
    }

    pub fn validate(&self, horizon: T) -> Result<()> {
        match self {
            PecletModel::Constant(v) => {
                if !v.is_finite() {
                    return Err(invalid("peclet", "value must be finite"));
                }
            }
            PecletModel::Piecewise(segs) => {
                let tol = T::lit(1e-9) * horizon.max(T::one());
                let first = segs.first().ok_or_else(|| invalid("peclet.segments", "no segments"))?;
                if first.start.abs() > tol {
                    return Err(invalid("peclet.segments", format!("first segment starts at {}, not 0", first.start)));
                }
                for s in segs {
                    if !(s.end > s.start) || !s.value.is_finite() {
                        return Err(invalid("peclet.segments", format!("bad segment [{}, {}]", s.start, s.end)));
                    }
                }
                for w in segs.windows(2) {
                    if (w[1].start - w[0].end).abs() > tol {
                        return Err(invalid(
                            "peclet.segments",
                            format!("segments not contiguous at {} / {}", w[0].end, w[1].start),
                        ));
                    }
                }
                let last = segs.last().unwrap();
                if last.end < horizon - tol {
                    return Err(invalid("peclet.segments", format!("segments end at {} before horizon {horizon}", last.end)));
                }
            }
        }
        Ok(())
    }

    /// Value at time `t`; segments are closed on the left, the last one also on the right.
    pub fn value_at(&self, t: T) -> T {
        match self {
            PecletModel::Constant(v) => *v,
            PecletModel::Piecewise(segs) => segs
                .iter()
                .find(|s| t < s.end)
                .or(segs.last())
                .map(|s| s.value)
                .unwrap_or_else(T::zero),
        }
    }

    /// Left limit at `t`: segments taken as closed on the right.
    pub fn value_before(&self, t: T) -> T {
        match self {
            PecletModel::Constant(v) => *v,
            PecletModel::Piecewise(segs) => segs
                .iter()
                .find(|s| t <= s.end)
                .or(segs.last())
                .map(|s| s.value)
                .unwrap_or_else(T::zero),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            PecletModel::Constant(_) => true,
            PecletModel::Piecewise(segs) => segs.windows(2).all(|w| w[0].value == w[1].value),
        }
    }

    pub fn scaled(&self, factor: T) -> Self {
        match self {
            PecletModel::Constant(v) => PecletModel::Constant(*v * factor),
            PecletModel::Piecewise(segs) => PecletModel::Piecewise(
                segs.iter().map(|s| PecletSegment { value: s.value * factor, ..*s }).collect(),
            ),
        }
    }

    pub fn values(&self) -> Vec<T> {
        match self {
            PecletModel::Constant(v) => vec![*v],
            PecletModel::Piecewise(segs) => segs.iter().map(|s| s.value).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values().iter().all(|v| *v == T::zero())
    }
}
