use super::operator::{assemble_trapezoid, FaceFlux, SpatialOperator};
use super::sg::check_finite;
use super::tridiag::{thomas_solve, TridiagonalSystem};
use crate::error::{invalid, Result};
use crate::model::ProblemSpec;
use crate::scalar::Real;

/// Classical Crank-Nicolson system with upwind advection for constant
/// material coefficients.
///
/// Péclet number and ambient values are taken at `t0` for the explicit half
/// and as left limits at `t1` for the implicit half. Wall rows are half-cell balances with
/// the Robin flux imposed at the wall node. Rows are scaled so that interior
/// rows read `-(gamma b+ + lambda) u_{j-1} + [1 + 2 lambda + gamma (b+ - b-)] u_j - (lambda - gamma b-) u_{j+1}`.
pub fn cn_assemble_linear<T: Real>(state: &[T], spec: &ProblemSpec<T>, t0: T, t1: T) -> Result<TridiagonalSystem<T>> {
    if !spec.is_linear() {
        return Err(invalid("material", "classical Crank-Nicolson needs constant coefficients"));
    }
    let old = SpatialOperator::build(spec, FaceFlux::Upwind, state, t0, t0)?;
    let new = SpatialOperator::build_closing(spec, FaceFlux::Upwind, state, t1)?;
    Ok(assemble_trapezoid(&old, &new, state, t1 - t0))
}

/// One classical Crank-Nicolson step (constant material only).
pub fn cn_step<T: Real>(state: &[T], spec: &ProblemSpec<T>, t: T, dt: T) -> Result<Vec<T>> {
    let next = thomas_solve(&cn_assemble_linear(state, spec, t, t + dt)?)?;
    check_finite(&next, 0, t + dt)?;
    Ok(next)
}

/// Implicit-explicit Crank-Nicolson system: storage, diffusion and Péclet
/// frozen at layer `n`, ambient values at their own times (left limit at the
/// end of the step).
pub fn cn_imex_assemble<T: Real>(state: &[T], spec: &ProblemSpec<T>, t: T, dt: T) -> Result<TridiagonalSystem<T>> {
    let old = SpatialOperator::build(spec, FaceFlux::Upwind, state, t, t)?;
    let mut new = old.clone();
    new.set_sources_before(spec, t + dt);
    Ok(assemble_trapezoid(&old, &new, state, dt))
}

/// One implicit-explicit Crank-Nicolson step: one tridiagonal solve, no
/// sub-iterations.
pub fn cn_imex_step<T: Real>(state: &[T], spec: &ProblemSpec<T>, t: T, dt: T) -> Result<Vec<T>> {
    let next = thomas_solve(&cn_imex_assemble(state, spec, t, dt)?)?;
    check_finite(&next, 0, t + dt)?;
    Ok(next)
}
