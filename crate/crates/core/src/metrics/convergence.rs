use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::error::{l2_errors, ErrorReport};
use super::reference::{verified_reference_with, ReferenceOptions, RichardsonCheck};
use crate::driver::solve;
use crate::error::{invalid, Error, Result};
use crate::model::{Grid1D, ProblemSpec, TimeControls};
use crate::schemes::Scheme;

/// `(h, eps)` pairs with the least-squares fit of `log eps = p log h + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square residual of the fit in log space.
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl ConvergenceTable {
    pub fn fit(mut points: Vec<(f64, f64)>) -> Result<Self> {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.len() < 3 {
            return Err(invalid("convergence", format!("need at least 3 points, got {}", points.len())));
        }
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("convergence", "step sizes must be distinct"));
        }
        if points.iter().any(|&(h, e)| !(h > 0.0) || !(e > 0.0) || !e.is_finite()) {
            return Err(invalid("convergence", "step sizes and errors must be positive and finite"));
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>() / n).sqrt();
        let monotone = points.windows(2).all(|w| w[0].1 <= w[1].1);
        let warning = (!monotone).then(|| "errors are not monotone in the step size".to_string());
        Ok(Self { points, slope, intercept, residual, warning })
    }
}

/// Least-squares slope of `log eps` against `log h`.
pub fn observed_order(table: &ConvergenceTable) -> f64 {
    table.slope
}

/// Which discretisation parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vary {
    Dx,
    Dt,
}

/// Result of a sweep: per-point error reports, the fit and the oracle check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub vary: Vary,
    pub scheme: Scheme,
    pub reports: Vec<ErrorReport>,
    pub table: ConvergenceTable,
    pub oracle: RichardsonCheck,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Integer `k` with `k * small = big` to `1e-9` relative, if any.
fn ratio(big: f64, small: f64) -> Option<usize> {
    let r = big / small;
    let k = r.round();
    ((r - k).abs() < 1e-9 * k.max(1.0) && k >= 1.0).then_some(k as usize)
}

/// Sweeps one discretisation parameter of `spec` and fits the observed
/// order against a single verified reference.
///
/// Space sweeps keep the time controls of `spec`; time sweeps keep its grid
/// and must use steps dividing the stored-stamp interval `dt * decimation`.
/// The reference is built on the finest grid (space) or finest step (time)
/// and checked against the smallest measured error.
pub fn convergence_study(
    spec: &ProblemSpec<f64>,
    scheme: Scheme,
    vary: Vary,
    values: &[f64],
    opts: ReferenceOptions,
) -> Result<ConvergenceStudy> {
    let mut values = values.to_vec();
    values.sort_by(|a, b| b.total_cmp(a));
    if values.len() < 3 {
        return Err(invalid("values", "a convergence sweep needs at least 3 values"));
    }
    if values.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("values", "sweep values must be distinct"));
    }
    let stamp = spec.time.dt * spec.time.decimation as f64;
    let specs: Vec<ProblemSpec<f64>> = values
        .iter()
        .map(|&h| -> Result<ProblemSpec<f64>> {
            match vary {
                Vary::Dx => Ok(spec.clone().with_grid(Grid1D::with_spacing(h)?)),
                Vary::Dt => {
                    let k = ratio(stamp, h)
                        .ok_or_else(|| invalid("values", format!("dt = {h} does not divide the stamp interval {stamp}")))?;
                    let time = TimeControls { dt: h, decimation: k, ..spec.time };
                    Ok(spec.clone().with_time(time))
                }
            }
        })
        .collect::<Result<_>>()?;

    // common reference discretisation
    let base = match vary {
        Vary::Dx => {
            let cells: Vec<usize> = specs.iter().map(|s| s.grid.len() - 1).collect();
            let lcm = cells.iter().fold(1, |acc, &c| acc / gcd(acc, c) * c);
            spec.clone().with_grid(Grid1D::new(lcm + 1)?)
        }
        Vary::Dt => specs.last().expect("non-empty sweep").clone(),
    };

    let runs: Vec<Result<_>> = specs.par_iter().map(|s| solve(s, scheme, &[]).and_then(|r| r.completed())).collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    // the reference must resolve the smallest error of the sweep
    let (reference, oracle) = verified_reference_with(&base, opts, |reference| {
        let mut smallest = f64::INFINITY;
        for run in &runs {
            let r = reference.restrict(&run.field.grid, &run.field.times)?;
            smallest = smallest.min(l2_errors(&run.field, &r)?.global);
        }
        Ok(smallest)
    })?;

    let mut reports = Vec::with_capacity(runs.len());
    for (run, (s, &h)) in runs.iter().zip(specs.iter().zip(&values)) {
        let r = reference.restrict(&run.field.grid, &run.field.times)?;
        let mut rep = l2_errors(&run.field, &r)?;
        rep.dx = s.grid.dx();
        rep.dt = match vary {
            Vary::Dt => h,
            Vary::Dx => s.time.dt,
        };
        rep.scheme = scheme.tag().to_string();
        reports.push(rep);
    }
    let points = reports
        .iter()
        .zip(&values)
        .map(|(r, &h)| (h, r.global))
        .collect::<Vec<_>>();
    if points.iter().any(|p| !(p.1 > 0.0)) {
        return Err(Error::Data("a sweep point reproduced the reference exactly; no order can be fitted".into()));
    }
    let table = ConvergenceTable::fit(points)?;
    Ok(ConvergenceStudy { vary, scheme, reports, table, oracle })
}
