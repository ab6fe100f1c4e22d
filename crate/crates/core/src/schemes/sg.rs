use super::operator::{assemble_trapezoid, FaceFlux, SpatialOperator};
use super::tridiag::thomas_solve;
use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::scalar::Real;

/// One explicit Scharfetter-Gummel step with coefficients frozen at `state`.
///
/// The caller is responsible for `dt <= sg_cfl_max_dt`.
pub fn sg_step<T: Real>(state: &[T], spec: &ProblemSpec<T>, t: T, dt: T) -> Result<Vec<T>> {
    let op = SpatialOperator::build(spec, FaceFlux::Fitted, state, t, t)?;
    let next = op.explicit_step(state, dt);
    check_finite(&next, 0, t + dt)?;
    Ok(next)
}

/// Largest stable explicit step at `(state, t)`: the minimum over nodes
/// (wall half-cells included) of the positivity bound.
pub fn sg_cfl_max_dt<T: Real>(spec: &ProblemSpec<T>, state: &[T], t: T) -> Result<T> {
    Ok(SpatialOperator::build(spec, FaceFlux::Fitted, state, t, t)?.positivity_bound())
}

/// Closed-form bound `dt <= dx c tanh(Pe dx / 2d) / Pe` for uniform
/// coefficients; `c dx^2 / 2d` at `Pe = 0`.
pub fn peclet_cfl_bound<T: Real>(pe: T, d: T, c: T, dx: T) -> T {
    let two = T::lit(2.0);
    let z = pe * dx / (two * d);
    if z.abs() < T::lit(1e-8) {
        c * dx * dx / (two * d)
    } else {
        dx * c * z.tanh() / pe
    }
}

/// Second-order step with fitted fluxes: trapezoidal in time, coefficients
/// taken at the midpoint state from an explicit-coefficient predictor.
///
/// Used to build reference solutions; the predictor is skipped when the
/// material is constant.
pub fn sg_trapezoid_step<T: Real>(state: &[T], spec: &ProblemSpec<T>, t: T, dt: T) -> Result<Vec<T>> {
    let t1 = t + dt;
    let mid = if spec.is_linear() {
        state.to_vec()
    } else {
        let op = SpatialOperator::build(spec, FaceFlux::Fitted, state, t, t)?;
        let mut new = op.clone();
        new.set_sources_before(spec, t1);
        let pred = thomas_solve(&assemble_trapezoid(&op, &new, state, dt))?;
        let half = T::lit(0.5);
        state.iter().zip(&pred).map(|(a, b)| half * (*a + *b)).collect()
    };
    let old = SpatialOperator::build(spec, FaceFlux::Fitted, &mid, t, t)?;
    let new = SpatialOperator::build_closing(spec, FaceFlux::Fitted, &mid, t1)?;
    let next = thomas_solve(&assemble_trapezoid(&old, &new, state, dt))?;
    check_finite(&next, 0, t1)?;
    Ok(next)
}

pub fn check_finite<T: Real>(row: &[T], step: usize, time: T) -> Result<()> {
    match row.iter().position(|v| !v.is_finite()) {
        Some(node) => Err(Error::Divergence { step, node, time: time.as_f64() }),
        None => Ok(()),
    }
}
