use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Uniform vertex-centred grid on `[0, 1]`.
///
/// Node `j` sits at `j * dx`; the first and last nodes lie on the walls and
/// own half-width control volumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Grid1D<T> {
    nodes: usize,
    dx: T,
}

#[derive(Serialize, Deserialize)]
struct GridRepr {
    nodes: usize,
}

impl<T: Real> TryFrom<GridRepr> for Grid1D<T> {
    type Error = crate::Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        Grid1D::new(r.nodes)
    }
}

impl<T: Real> From<Grid1D<T>> for GridRepr {
    fn from(g: Grid1D<T>) -> Self {
        GridRepr { nodes: g.nodes }
    }
}

impl<T: Real> Grid1D<T> {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 3 {
            return Err(invalid("grid.nodes", format!("need at least 3 nodes, got {nodes}")));
        }
        Ok(Self { nodes, dx: T::one() / T::count(nodes - 1) })
    }

    /// Grid with the given spacing; `1 / dx` must be (close to) an integer.
    pub fn with_spacing(dx: T) -> Result<Self> {
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(invalid("grid.dx", format!("spacing must be positive, got {dx}")));
        }
        let cells = (T::one() / dx).round();
        let rel = ((cells * dx) - T::one()).abs();
        if rel > T::lit(1e-9).max(T::epsilon() * T::lit(16.0)) {
            return Err(invalid("grid.dx", format!("1/dx = {} is not an integer", T::one() / dx)));
        }
        let cells = cells.to_usize().ok_or_else(|| invalid("grid.dx", "too many cells"))?;
        Self::new(cells + 1)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }

    #[inline]
    pub fn node(&self, j: usize) -> T {
        if j + 1 == self.nodes {
            T::one()
        } else {
            T::count(j) * self.dx
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.nodes).map(|j| self.node(j)).collect()
    }

    /// Width of the control volume owned by node `j`.
    #[inline]
    pub fn control_volume(&self, j: usize) -> T {
        if j == 0 || j + 1 == self.nodes {
            self.dx * T::lit(0.5)
        } else {
            self.dx
        }
    }

    /// Cell `j` (between nodes `j` and `j+1`) containing `x`, clamped to the domain.
    pub fn cell_of(&self, x: T) -> usize {
        let cells = self.nodes - 1;
        let k = (x / self.dx).floor().to_usize().unwrap_or(0);
        k.min(cells - 1)
    }

    /// If `fine` refines `self` by an integer factor, returns that factor.
    pub fn refinement_factor(&self, fine: &Grid1D<T>) -> Option<usize> {
        let coarse_cells = self.nodes - 1;
        let fine_cells = fine.nodes - 1;
        (fine_cells % coarse_cells == 0).then_some(fine_cells / coarse_cells)
    }
}
