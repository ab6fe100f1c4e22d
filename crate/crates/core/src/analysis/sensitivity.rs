use std::fmt;

use serde::{Deserialize, Serialize};

use crate::driver::solve;
use crate::error::{Error, Result};
use crate::model::{relative_humidity, ProblemSpec};
use crate::schemes::Scheme;

pub const DEFAULT_DELTA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityParam {
    /// Scale of the moisture transport coefficient.
    Diffusion,
    Peclet,
}

impl fmt::Display for SensitivityParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SensitivityParam::Diffusion => "d_m",
            SensitivityParam::Peclet => "peclet",
        })
    }
}

impl std::str::FromStr for SensitivityParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d" | "dm" | "d_m" | "diffusion" => Ok(SensitivityParam::Diffusion),
            "pe" | "peclet" => Ok(SensitivityParam::Peclet),
            other => Err(Error::Config(format!("unknown sensitivity parameter `{other}` (expected d_m or peclet)"))),
        }
    }
}

/// `Theta(t) = p * dphi/dp` at one probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivitySeries {
    pub param: SensitivityParam,
    pub x: f64,
    pub times: Vec<f64>,
    pub theta: Vec<f64>,
}

impl SensitivitySeries {
    /// Stamp and value of the largest `|Theta|`.
    pub fn peak(&self) -> (f64, f64) {
        self.times
            .iter()
            .zip(&self.theta)
            .fold((self.times[0], 0.0), |best, (&t, &v)| if v.abs() > best.1.abs() { (t, v) } else { best })
    }
}

/// Trapezoidal integral of `|values|` over `times`.
pub fn integrated_abs(times: &[f64], values: &[f64]) -> f64 {
    times.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0].abs() + v[1].abs())).sum()
}

fn perturbed(spec: &ProblemSpec<f64>, param: SensitivityParam, factor: f64) -> Result<ProblemSpec<f64>> {
    let mut s = spec.clone();
    match param {
        SensitivityParam::Diffusion => s.material = s.material.with_scaled_diffusion(factor)?,
        SensitivityParam::Peclet => s.peclet = s.peclet.scaled(factor),
    }
    Ok(s)
}

/// Central-difference sensitivity of the relative humidity at each probe.
///
/// The scaled parameter is the whole diffusion law or the whole Péclet
/// model, so `p * dphi/dp = dphi/dlog(s)` at `s = 1`, which is what the
/// difference quotient below evaluates.
pub fn sensitivity(
    spec: &ProblemSpec<f64>,
    scheme: Scheme,
    param: SensitivityParam,
    probes: &[f64],
    delta: f64,
) -> Result<Vec<SensitivitySeries>> {
    if !(delta > 0.0 && delta <= 0.1) {
        return Err(Error::InvalidParameter { name: "delta", reason: format!("must lie in (0, 0.1], got {delta}") });
    }
    spec.validate()?;
    let phi_i = spec.initial.humidity;
    let times = spec.time.stored_times();
    if param == SensitivityParam::Peclet && spec.peclet.is_zero() {
        return Ok(probes
            .iter()
            .map(|&x| SensitivitySeries { param, x, times: times.clone(), theta: vec![0.0; times.len()] })
            .collect());
    }

    let run = |sign: f64| -> Result<Vec<Vec<f64>>> {
        let label = if sign > 0.0 { "1 + delta" } else { "1 - delta" };
        let s = perturbed(spec, param, 1.0 + sign * delta)?;
        let r = solve(&s, scheme, probes).and_then(|r| r.completed()).map_err(|e| Error::Perturbation {
            label: format!("{param} x ({label})"),
            reason: e.to_string(),
        })?;
        Ok(r.probes.series)
    };
    let (up, down) = rayon::join(|| run(1.0), || run(-1.0));
    let (up, down) = (up?, down?);

    probes
        .iter()
        .enumerate()
        .map(|(p, &x)| {
            let theta = up[p]
                .iter()
                .zip(&down[p])
                .map(|(&a, &b)| {
                    let pa = relative_humidity(a, phi_i)?.phi;
                    let pb = relative_humidity(b, phi_i)?.phi;
                    Ok((pa - pb) / (2.0 * delta))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SensitivitySeries { param, x, times: times.clone(), theta })
        })
        .collect()
}
