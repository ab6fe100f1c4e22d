use serde::{Deserialize, Serialize};

use super::Grid1D;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stored layers `u[n][j]` of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SolutionField<T> {
    pub grid: Grid1D<T>,
    pub times: Vec<T>,
    pub rows: Vec<Vec<T>>,
    /// Accepted step sizes, in order (every step, not only stored ones).
    #[serde(default)]
    pub step_log: Vec<T>,
}

impl<T: Real> SolutionField<T> {
    pub fn new(grid: Grid1D<T>, initial: Vec<T>) -> Self {
        debug_assert_eq!(initial.len(), grid.len());
        Self { grid, times: vec![T::zero()], rows: vec![initial], step_log: Vec::new() }
    }

    pub fn push(&mut self, t: T, row: Vec<T>) {
        self.times.push(t);
        self.rows.push(row);
    }

    pub fn layers(&self) -> usize {
        self.rows.len()
    }

    pub fn last_row(&self) -> &[T] {
        self.rows.last().expect("field has at least one layer")
    }

    pub fn final_time(&self) -> T {
        *self.times.last().expect("field has at least one layer")
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.is_finite())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.grid.len())
    }

    /// Samples this (finer) field on the nodes of `grid` and the given time stamps.
    ///
    /// Both refinements must be exact: nodes of `grid` must be nodes of
    /// `self.grid`, and every stamp must match a stored time to `1e-9` relative.
    pub fn restrict(&self, grid: &Grid1D<T>, times: &[T]) -> Result<SolutionField<T>> {
        let factor = grid.refinement_factor(&self.grid).ok_or_else(|| Error::ShapeMismatch {
            left: format!("{} nodes", grid.len()),
            right: format!("{} nodes (not a refinement)", self.grid.len()),
        })?;
        let scale = self.final_time().abs().max(T::one());
        let tol = T::lit(1e-9) * scale;
        let mut rows = Vec::with_capacity(times.len());
        let mut cursor = 0;
        for &t in times {
            while cursor < self.times.len() && self.times[cursor] < t - tol {
                cursor += 1;
            }
            if cursor == self.times.len() || (self.times[cursor] - t).abs() > tol {
                return Err(Error::ShapeMismatch {
                    left: format!("stamp t = {t}"),
                    right: "no matching stored layer in reference".into(),
                });
            }
            let row = &self.rows[cursor];
            rows.push((0..grid.len()).map(|j| row[j * factor]).collect());
        }
        Ok(SolutionField { grid: *grid, times: times.to_vec(), rows, step_log: Vec::new() })
    }
}
