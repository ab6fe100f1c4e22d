use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::ProblemSpec;
use crate::scalar::Real;
use crate::schemes::{sg_interpolate, FaceFlux};

/// Observation points and the series sampled at every stored layer.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct ProbeSet<T> {
    pub positions: Vec<T>,
    /// `series[p][n]` is the value at probe `p` on stored layer `n`.
    pub series: Vec<Vec<T>>,
}

impl<T: Real> ProbeSet<T> {
    pub fn new(positions: &[T]) -> Result<Self> {
        for &x in positions {
            if !(x >= T::zero() && x <= T::one()) {
                return Err(invalid("probes", format!("position {x} outside [0, 1]")));
            }
        }
        Ok(Self { positions: positions.to_vec(), series: vec![Vec::new(); positions.len()] })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub(crate) fn record(&mut self, row: &[T], spec: &ProblemSpec<T>, kind: FaceFlux, t: T) {
        for (p, &x) in self.positions.iter().enumerate() {
            self.series[p].push(sample_row(row, spec, kind, t, x));
        }
    }
}

/// Value of a stored row at `x`: the exact exponential profile of the
/// fitted flux for `FaceFlux::Fitted`, linear interpolation otherwise.
pub fn sample_row<T: Real>(row: &[T], spec: &ProblemSpec<T>, kind: FaceFlux, t: T, x: T) -> T {
    let grid = &spec.grid;
    let j = grid.cell_of(x);
    let s = (x - grid.node(j)).max(T::zero()).min(grid.dx());
    let (uj, uj1) = (row[j], row[j + 1]);
    match kind {
        FaceFlux::Fitted => {
            let nu = T::lit(0.5) * (spec.material.diffusion(uj) + spec.material.diffusion(uj1));
            sg_interpolate(s, grid.dx(), uj, uj1, spec.peclet.value_at(t), nu)
        }
        FaceFlux::Upwind => uj + (uj1 - uj) * (s / grid.dx()),
    }
}
