use crate::error::{invalid, Error, Result};
use crate::model::ProblemSpec;
use crate::scalar::Real;
use crate::schemes::{assemble_backward_euler, thomas_solve, Scheme, SpatialOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyOptions<T> {
    /// Stop once `max |u' - u| / dt` falls below this.
    pub rate_tol: T,
    /// ... and the increment itself is below this (relative to the envelope).
    pub increment_tol: T,
    pub max_steps: usize,
    /// Pseudo-time step growth per iteration and its cap.
    pub growth: T,
    pub max_dt: T,
}

impl<T: Real> Default for SteadyOptions<T> {
    fn default() -> Self {
        Self {
            rate_tol: T::lit(1e-10),
            increment_tol: T::lit(1e-12),
            max_steps: 10_000,
            growth: T::lit(2.0),
            max_dt: T::lit(1e8),
        }
    }
}

pub fn steady_state_solve<T: Real>(spec: &ProblemSpec<T>, scheme: Scheme) -> Result<Vec<T>> {
    steady_state_solve_with(spec, scheme, &SteadyOptions::default())
}

/// Marches the scheme's spatial operator in pseudo-time to a fixed point.
///
/// Each pseudo-step is linearly implicit (backward Euler with coefficients
/// frozen at the current iterate), with a growing step, so stiff walls such
/// as `Bi = 1e6` converge in a few dozen iterations. The fixed point is the
/// one of the scheme's spatial discretisation.
pub fn steady_state_solve_with<T: Real>(spec: &ProblemSpec<T>, scheme: Scheme, opts: &SteadyOptions<T>) -> Result<Vec<T>> {
    spec.validate()?;
    let constant = spec.boundary_left.ambient.is_time_constant()
        && spec.boundary_right.ambient.is_time_constant()
        && spec.peclet.is_constant();
    if !constant {
        return Err(invalid("boundary", "steady solve needs time-constant ambient signals and Péclet number"));
    }
    let kind = scheme.face_flux();
    let scale = spec.envelope().max(T::one());
    let mut u = spec.initial_row();
    let mut dt = spec.time.dt;
    let mut tail = Vec::new();
    for _ in 0..opts.max_steps {
        let op = SpatialOperator::build(spec, kind, &u, T::zero(), T::zero())?;
        let next = thomas_solve(&assemble_backward_euler(&op, &u, dt))?;
        let inc = u.iter().zip(&next).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
        if !inc.is_finite() {
            return Err(Error::Divergence { step: tail.len(), node: 0, time: f64::NAN });
        }
        u = next;
        let rate = inc / dt;
        tail.push(rate.as_f64());
        if rate < opts.rate_tol && inc <= opts.increment_tol * scale {
            return Ok(u);
        }
        dt = (dt * opts.growth).min(opts.max_dt);
    }
    let keep = tail.len().saturating_sub(8);
    Err(Error::NotConverged { steps: opts.max_steps, tail: tail.split_off(keep) })
}
