use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measurement::{interpolate_series, MeasurementSeries};
use crate::driver::solve;
use crate::error::{Error, Result};
use crate::model::{relative_humidity, PecletModel, ProblemSpec};
use crate::schemes::Scheme;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub scheme: Scheme,
    /// Coarse scan size before the golden-section refinement.
    pub grid_points: usize,
    /// Final bracket width.
    pub tolerance: f64,
    /// Coordinate-descent sweeps over the segments.
    pub sweeps: usize,
    /// Sweeps stop once the misfit changes by less than this.
    pub sweep_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { scheme: Scheme::Sg, grid_points: 32, tolerance: 1e-3, sweeps: 3, sweep_tolerance: 1e-6 }
    }
}

/// Result of a Péclet estimation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PecletFit {
    pub model: PecletModel<f64>,
    /// RMS misfit over all samples; no smaller than at any evaluated candidate.
    pub misfit: f64,
    /// Number of forward solves.
    pub evaluations: usize,
    pub bounds: (f64, f64),
}

/// RMS difference between simulated and measured humidity over the samples
/// with `t >= from`. Diverged or unphysical runs score `+inf`.
fn windowed_misfit(spec: &ProblemSpec<f64>, data: &[MeasurementSeries], peclet: PecletModel<f64>, scheme: Scheme, from: f64) -> f64 {
    let spec = spec.clone().with_peclet(peclet);
    let probes: Vec<f64> = data.iter().map(|s| s.x).collect();
    let run = match solve(&spec, scheme, &probes).and_then(|r| r.completed()) {
        Ok(r) => r,
        Err(_) => return f64::INFINITY,
    };
    let phi_i = spec.initial.humidity;
    let (mut sum, mut count) = (0.0, 0usize);
    for (p, series) in data.iter().enumerate() {
        for &(t, phi) in series.samples.iter().filter(|s| s.0 >= from) {
            let u = interpolate_series(&run.field.times, &run.probes.series[p], t);
            let Ok(sim) = relative_humidity(u, phi_i) else { return f64::INFINITY };
            sum += (sim.phi - phi) * (sim.phi - phi);
            count += 1;
        }
    }
    if count == 0 {
        return 0.0;
    }
    let e = (sum / count as f64).sqrt();
    if e.is_finite() {
        e
    } else {
        f64::INFINITY
    }
}

/// RMS humidity misfit of `peclet` against `data`.
pub fn misfit(spec: &ProblemSpec<f64>, data: &[MeasurementSeries], peclet: &PecletModel<f64>, scheme: Scheme) -> f64 {
    windowed_misfit(spec, data, peclet.clone(), scheme, f64::NEG_INFINITY)
}

fn check_inputs(data: &[MeasurementSeries], lo: f64, hi: f64) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Data("at least one measurement series is required".into()));
    }
    for s in data {
        s.validate()?;
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter { name: "bounds", reason: format!("need finite lo < hi, got [{lo}, {hi}]") });
    }
    Ok(())
}

/// Best `(value, misfit)` of a scalar objective on `[lo, hi]`: a uniform scan
/// followed by golden-section search in the bracket around the best point.
/// Returns the best candidate ever evaluated and the evaluation count.
fn scan_and_refine<F>(f: F, lo: f64, hi: f64, opts: &FitOptions) -> (f64, f64, usize)
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = opts.grid_points.max(2);
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let fs: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    let mut evals = n;
    let mut best = (xs[0], fs[0]);
    let mut ib = 0;
    for (i, (&x, &v)) in xs.iter().zip(&fs).enumerate() {
        if v < best.1 {
            best = (x, v);
            ib = i;
        }
    }
    if !best.1.is_finite() {
        return (best.0, best.1, evals);
    }
    let (mut a, mut b) = (xs[ib.saturating_sub(1)], xs[(ib + 1).min(n - 1)]);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    evals += 2;
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best.1 {
            best = (x, v);
        }
    }
    while b - a > opts.tolerance {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
        evals += 1;
    }
    (best.0, best.1, evals)
}

/// Constant Péclet number minimising the RMS humidity misfit on `[lo, hi]`.
pub fn fit_peclet_constant(
    spec: &ProblemSpec<f64>,
    data: &[MeasurementSeries],
    bounds: (f64, f64),
    opts: &FitOptions,
) -> Result<PecletFit> {
    let (lo, hi) = bounds;
    check_inputs(data, lo, hi)?;
    let f = |pe: f64| windowed_misfit(spec, data, PecletModel::Constant(pe), opts.scheme, f64::NEG_INFINITY);
    let (pe, e, evaluations) = scan_and_refine(f, lo, hi, opts);
    if !e.is_finite() {
        return Err(Error::FitInfeasible(format!("every candidate in [{lo}, {hi}] diverged")));
    }
    Ok(PecletFit { model: PecletModel::Constant(pe), misfit: e, evaluations, bounds })
}

/// Piecewise-constant Péclet number on the given segment boundaries
/// (`t_0 = 0 < ... < t_k = horizon`), by coordinate descent from the best
/// constant fit. Each segment is refitted against the samples it can
/// influence, i.e. those stamped at or after its start.
pub fn fit_peclet_piecewise(
    spec: &ProblemSpec<f64>,
    data: &[MeasurementSeries],
    boundaries: &[f64],
    bounds: (f64, f64),
    opts: &FitOptions,
) -> Result<PecletFit> {
    let k = boundaries.len().saturating_sub(1);
    PecletModel::piecewise(boundaries, &vec![0.0; k])?.validate(spec.time.horizon)?;
    let start = fit_peclet_constant(spec, data, bounds, opts)?;
    let PecletModel::Constant(pe0) = start.model else { unreachable!("constant fit returns a constant model") };
    if k == 1 {
        return Ok(start);
    }

    let mut values = vec![pe0; k];
    let mut best = start.misfit;
    let mut evaluations = start.evaluations;
    for _ in 0..opts.sweeps {
        let before = best;
        for s in 0..k {
            let from = boundaries[s];
            let trial = |v: f64| {
                let mut vals = values.clone();
                vals[s] = v;
                PecletModel::piecewise(boundaries, &vals).expect("validated boundaries")
            };
            let f = |v: f64| windowed_misfit(spec, data, trial(v), opts.scheme, from);
            let (v, _, n) = scan_and_refine(f, bounds.0, bounds.1, opts);
            evaluations += n + 1;
            // accept only what lowers the full misfit
            let e = misfit(spec, data, &trial(v), opts.scheme);
            if e < best {
                best = e;
                values[s] = v;
            }
        }
        if (before - best).abs() < opts.sweep_tolerance {
            break;
        }
    }
    Ok(PecletFit { model: PecletModel::piecewise(boundaries, &values)?, misfit: best, evaluations, bounds })
}
