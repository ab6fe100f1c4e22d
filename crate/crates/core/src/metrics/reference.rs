use serde::{Deserialize, Serialize};

use super::error::l2_errors;
use crate::driver::{march, Integrator, SolveOptions};
use crate::error::{invalid, Error, Result};
use crate::model::{Grid1D, ProblemSpec, SolutionField, TimeControls};
use crate::scalar::Real;
use crate::schemes::Scheme;

/// How a reference run is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Second-order fitted-flux integrator, refined in space and time.
    Fitted,
    /// The given scheme on the same grid, refined in time only. Isolates
    /// temporal error from the scheme's own spatial error.
    Temporal(Scheme),
}

/// Refinement of a reference run relative to the requested discretisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceOptions {
    /// Cells per requested cell.
    pub space: usize,
    /// Steps per requested step (per synchronisation interval when adaptive).
    pub time: usize,
    pub kind: ReferenceKind,
}

impl Default for ReferenceOptions {
    fn default() -> Self {
        Self { space: 4, time: 4, kind: ReferenceKind::Fitted }
    }
}

impl ReferenceOptions {
    pub fn fitted(space: usize, time: usize) -> Self {
        Self { space, time, kind: ReferenceKind::Fitted }
    }

    pub fn temporal(scheme: Scheme, time: usize) -> Self {
        Self { space: 1, time, kind: ReferenceKind::Temporal(scheme) }
    }

    /// Next level of the refinement check: every refined direction doubles.
    pub fn doubled(self) -> Self {
        match self.kind {
            ReferenceKind::Fitted => Self { space: 2 * self.space, time: 2 * self.time, ..self },
            ReferenceKind::Temporal(_) => Self { time: 2 * self.time, ..self },
        }
    }
}

/// Outcome of the refinement self-check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RichardsonCheck {
    /// L2 change between the reference and its doubled refinement.
    pub change: f64,
    /// Error the reference is meant to measure.
    pub measured: f64,
    pub options: ReferenceOptions,
    pub escalated: bool,
}

/// The spec refined by `opts`, storing exactly the stamps the original stores.
pub fn refined_spec<T: Real>(spec: &ProblemSpec<T>, opts: ReferenceOptions) -> Result<ProblemSpec<T>> {
    if opts.space == 0 || opts.time == 0 {
        return Err(invalid("reference", "refinement factors must be at least 1"));
    }
    let cells = spec.grid.len() - 1;
    let grid = Grid1D::new(cells * opts.space + 1)?;
    let t = spec.time;
    let time = TimeControls::fixed(t.dt / T::count(opts.time), t.horizon).with_decimation(t.decimation * opts.time);
    Ok(spec.clone().with_grid(grid).with_time(time))
}

/// Second-order fitted-flux solution on a refined grid, restricted to the
/// nodes and stamps of `spec`.
pub fn reference_solution<T: Real>(spec: &ProblemSpec<T>, opts: ReferenceOptions) -> Result<SolutionField<T>> {
    spec.validate()?;
    let fine = refined_spec(spec, opts)?;
    let integrator = match opts.kind {
        ReferenceKind::Fitted => Integrator::Trapezoid,
        ReferenceKind::Temporal(s) => Integrator::Scheme(s),
    };
    let run = march(&fine, integrator, &[], &SolveOptions::default())?.completed()?;
    let stamps: Vec<T> = run.field.times.clone();
    run.field.restrict(&spec.grid, &stamps)
}

/// Reference solution verified so that one further doubling of both
/// refinements changes it by less than `10 %` of `measured`.
///
/// Escalates once to the doubled refinement before giving up with
/// `OracleUnreliable`.
pub fn verified_reference<T: Real>(
    spec: &ProblemSpec<T>,
    opts: ReferenceOptions,
    measured: f64,
) -> Result<(SolutionField<T>, RichardsonCheck)> {
    verified_reference_with(spec, opts, |_| Ok(measured))
}

/// As [`verified_reference`], with the measured error computed from the
/// candidate reference itself.
pub fn verified_reference_with<T: Real>(
    spec: &ProblemSpec<T>,
    opts: ReferenceOptions,
    mut measure: impl FnMut(&SolutionField<T>) -> Result<f64>,
) -> Result<(SolutionField<T>, RichardsonCheck)> {
    const RATIO: f64 = 0.1;
    let mut current = opts;
    let mut base = reference_solution(spec, current)?;
    let mut change = f64::INFINITY;
    let mut limit = 0.0;
    for attempt in 0..2 {
        let measured = measure(&base)?;
        let finer = reference_solution(spec, current.doubled())?;
        change = l2_errors(&base, &finer)?.global;
        limit = RATIO * measured;
        if change <= limit {
            let check = RichardsonCheck { change, measured, options: current, escalated: attempt > 0 };
            return Ok((base, check));
        }
        base = finer;
        current = current.doubled();
    }
    Err(Error::OracleUnreliable { change, limit })
}
