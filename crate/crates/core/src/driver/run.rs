use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::probes::ProbeSet;
use super::stepper::{Integrator, Stepper};
use crate::error::{Error, Result};
use crate::model::{ProblemSpec, SolutionField, StepMode};
use crate::scalar::Real;
use crate::schemes::{sg_cfl_max_dt, Scheme};

/// Smallest admissible step.
pub const MIN_STEP: f64 = 1e-12;
/// The divergence monitor inspects every this many steps (and every stamp).
const MONITOR_STRIDE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    Diverged,
    StepUnderflow,
}

/// Summary of a time-marching run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scheme: String,
    pub status: RunStatus,
    pub diverged: bool,
    pub accepted_steps: usize,
    /// Steps shortened below the nominal size to land on a stored stamp.
    pub clamped_steps: usize,
    pub min_dt: f64,
    pub max_dt: f64,
    pub final_time: f64,
    pub wall_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub failure: Option<Error>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Keep every accepted step size in `SolutionField::step_log`.
    pub record_steps: bool,
    /// Sup-norm limit, as a multiple of the ambient envelope.
    pub divergence_factor: f64,
    /// Reject fixed explicit steps above the stability bound at `t = 0`.
    /// Turning this off is only useful for stability experiments.
    pub enforce_cfl: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { record_steps: false, divergence_factor: 1e6, enforce_cfl: true }
    }
}

/// Field, report and probe series of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Run<T> {
    pub field: SolutionField<T>,
    pub report: RunReport,
    pub probes: ProbeSet<T>,
}

impl<T: Real> Run<T> {
    pub fn is_completed(&self) -> bool {
        self.report.status == RunStatus::Completed
    }

    /// The run itself, or the error that stopped it.
    pub fn completed(self) -> Result<Self> {
        match self.report.failure.clone() {
            Some(e) if !self.is_completed() => Err(e),
            _ => Ok(self),
        }
    }
}

/// Marches `spec` to its horizon with `scheme`, sampling `probes` on every
/// stored layer.
///
/// Divergence and step underflow end the run early with the last finite
/// layer kept; they are reported through `RunReport::status`, not as `Err`.
pub fn solve<T: Real>(spec: &ProblemSpec<T>, scheme: Scheme, probes: &[T]) -> Result<Run<T>> {
    solve_with(spec, scheme, probes, &SolveOptions::default())
}

pub fn solve_with<T: Real>(spec: &ProblemSpec<T>, scheme: Scheme, probes: &[T], opts: &SolveOptions) -> Result<Run<T>> {
    spec.validate()?;
    if opts.enforce_cfl && scheme == Scheme::Sg && !spec.time.is_adaptive() {
        let bound = sg_cfl_max_dt(spec, &spec.initial_row(), T::zero())?;
        if spec.time.dt > bound {
            return Err(Error::CflViolation { dt: spec.time.dt.as_f64(), bound: bound.as_f64() });
        }
    }
    march(spec, Integrator::Scheme(scheme), probes, opts)
}

pub(crate) fn march<T: Real>(
    spec: &ProblemSpec<T>,
    integrator: Integrator,
    probe_positions: &[T],
    opts: &SolveOptions,
) -> Result<Run<T>> {
    let started = Instant::now();
    let time = spec.time;
    let mut stepper = Stepper::new(spec, integrator)?;
    let kind = integrator.face_flux();
    let safety = match (integrator, time.mode) {
        (Integrator::Scheme(Scheme::Sg), StepMode::Adaptive { safety }) => Some(safety),
        _ => None,
    };
    let layers = time.layer_count();
    let limit = T::lit(opts.divergence_factor) * spec.envelope().max(T::one());
    let range = spec.material.range();

    let mut u = spec.initial_row();
    let mut next = u.clone();
    let mut field = SolutionField::new(spec.grid, u.clone());
    let mut probes = ProbeSet::new(probe_positions)?;
    probes.record(&u, spec, kind, T::zero());

    let mut report = RunReport {
        scheme: match integrator {
            Integrator::Scheme(s) => s.tag().to_string(),
            Integrator::Trapezoid => "sg_trapezoid".to_string(),
        },
        status: RunStatus::Completed,
        diverged: false,
        accepted_steps: 0,
        clamped_steps: 0,
        min_dt: f64::INFINITY,
        max_dt: 0.0,
        final_time: 0.0,
        wall_time_s: 0.0,
        message: None,
        warnings: Vec::new(),
        failure: None,
    };
    let mut left_range = false;
    let mut t = T::zero();

    'outer: for k in 1..=layers {
        let target = time.layer_time(k);
        let interval = if k < layers { time.dt } else { target - time.layer_time(k - 1) };
        let mut rem = interval;
        // current plan: `h` repeated while the stability bound is unchanged
        let mut plan: Option<(T, T)> = None;
        while rem > T::zero() {
            let bound = match stepper.prepare(&u, t) {
                Ok(b) => b,
                Err(e) => {
                    fail(&mut report, RunStatus::Diverged, e);
                    break 'outer;
                }
            };
            let h = match safety {
                None => rem,
                Some(s) => {
                    let cap = s * bound;
                    if !(cap >= T::lit(MIN_STEP)) {
                        let e = Error::StepUnderflow { time: t.as_f64(), dt: cap.as_f64() };
                        fail(&mut report, RunStatus::StepUnderflow, e);
                        break 'outer;
                    }
                    match plan {
                        Some((b, h)) if b == bound && h <= rem => h,
                        _ => {
                            let m = (rem / cap).ceil().max(T::one());
                            let h = rem / m;
                            plan = Some((bound, h));
                            h
                        }
                    }
                }
            };
            if let Err(e) = stepper.advance(&u, t, h, &mut next) {
                let e = relabel(e, report.accepted_steps + 1, t + h);
                fail(&mut report, RunStatus::Diverged, e);
                break 'outer;
            }
            let last = h >= rem || (rem - h) <= interval * T::lit(1e-10);
            let t_new = if last { target } else { t + h };
            let check = last || (report.accepted_steps + 1) % MONITOR_STRIDE == 0;
            let bad = if check { next.iter().position(|v| !(v.abs() <= limit)) } else { None };
            if let Some(node) = bad {
                let e = Error::Divergence { step: report.accepted_steps + 1, node, time: t_new.as_f64() };
                fail(&mut report, RunStatus::Diverged, e);
                break 'outer;
            }
            report.accepted_steps += 1;
            let hf = h.as_f64();
            report.min_dt = report.min_dt.min(hf);
            report.max_dt = report.max_dt.max(hf);
            let nominal = safety.map_or(time.dt, |s| s * bound);
            if last && h < nominal * T::lit(1.0 - 1e-12) {
                report.clamped_steps += 1;
            }
            if opts.record_steps {
                field.step_log.push(h);
            }
            std::mem::swap(&mut u, &mut next);
            t = t_new;
            rem = if last { T::zero() } else { rem - h };
        }
        if !left_range && u.iter().any(|v| !(*v >= range.0 && *v <= range.1)) {
            left_range = true;
            report.warnings.push(format!(
                "solution left the admissible material range [{}, {}] near t = {}",
                range.0, range.1, target
            ));
        }
        if k % time.decimation == 0 || k == layers {
            field.push(target, u.clone());
            probes.record(&u, spec, kind, target);
        }
    }

    if report.failure.is_some() && t > field.final_time() && u.iter().all(|v| v.is_finite()) {
        // keep the last finite iterate
        field.push(t, u.clone());
        probes.record(&u, spec, kind, t);
    }
    report.final_time = t.as_f64();
    report.wall_time_s = started.elapsed().as_secs_f64();
    if report.accepted_steps == 0 {
        report.min_dt = 0.0;
    }
    Ok(Run { field, report, probes })
}

fn fail(report: &mut RunReport, status: RunStatus, e: Error) {
    report.status = status;
    report.diverged = status == RunStatus::Diverged;
    report.message = Some(e.to_string());
    report.failure = Some(e);
}

fn relabel(e: Error, step: usize, time: impl Real) -> Error {
    match e {
        Error::Divergence { node, .. } => Error::Divergence { step, node, time: time.as_f64() },
        other => other,
    }
}
