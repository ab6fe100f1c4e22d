use serde::{Deserialize, Serialize};

use super::{Grid1D, MaterialModel, PecletModel, RobinBoundary, Side, TimeControls};
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Uniform initial state `u = value` and the relative humidity it represents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct InitialState<T> {
    #[serde(default = "unit")]
    pub u: T,
    /// Relative humidity at `u = 1`; converts the field to `phi = u * humidity`.
    pub humidity: T,
}

fn unit<T: Real>() -> T {
    T::one()
}

/// Full dimensionless problem:
///
/// `c(u) u_t = (d(u) u_x)_x - Pé(t) u_x` on `[0, 1]` with Robin walls and a
/// uniform initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ProblemSpec<T> {
    pub grid: Grid1D<T>,
    pub time: TimeControls<T>,
    pub material: MaterialModel<T>,
    pub peclet: PecletModel<T>,
    pub boundary_left: RobinBoundary<T>,
    pub boundary_right: RobinBoundary<T>,
    pub initial: InitialState<T>,
}

impl<T: Real> ProblemSpec<T> {
    pub fn validate(&self) -> Result<()> {
        self.time.validate()?;
        self.peclet.validate(self.time.horizon)?;
        if self.boundary_left.side != Side::Left {
            return Err(invalid("boundary_left.side", "must be `left`"));
        }
        if self.boundary_right.side != Side::Right {
            return Err(invalid("boundary_right.side", "must be `right`"));
        }
        self.boundary_left.validate(self.time.horizon)?;
        self.boundary_right.validate(self.time.horizon)?;
        let u0 = self.initial.u;
        if !u0.is_finite() || !self.material.in_range(u0) {
            return Err(invalid("initial.u", format!("{u0} outside the admissible material range")));
        }
        let h = self.initial.humidity;
        if !(h > T::zero() && h < T::one()) {
            return Err(invalid("initial.humidity", format!("must lie in (0, 1), got {h}")));
        }
        Ok(())
    }

    pub fn initial_row(&self) -> Vec<T> {
        vec![self.initial.u; self.grid.len()]
    }

    pub fn with_grid(mut self, grid: Grid1D<T>) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_time(mut self, time: TimeControls<T>) -> Self {
        self.time = time;
        self
    }

    pub fn with_peclet(mut self, peclet: PecletModel<T>) -> Self {
        self.peclet = peclet;
        self
    }

    pub fn boundary(&self, side: Side) -> &RobinBoundary<T> {
        match side {
            Side::Left => &self.boundary_left,
            Side::Right => &self.boundary_right,
        }
    }

    /// Coefficients are independent of `u` (Péclet may still depend on time).
    pub fn is_linear(&self) -> bool {
        self.material.is_constant()
    }

    /// Largest magnitude the solution can legitimately reach.
    pub fn envelope(&self) -> T {
        self.initial
            .u
            .abs()
            .max(self.boundary_left.ambient.envelope())
            .max(self.boundary_right.ambient.envelope())
    }
}
