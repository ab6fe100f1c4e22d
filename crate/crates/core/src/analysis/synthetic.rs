use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::measurement::{interpolate_series, MeasurementSeries};
use crate::driver::solve;
use crate::error::{Error, Result};
use crate::model::{relative_humidity, ProblemSpec};
use crate::schemes::Scheme;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticOptions {
    pub scheme: Scheme,
    /// Standard deviation of the additive Gaussian noise on `phi`.
    pub sigma: f64,
    /// Sampling period; samples start at `t = 0`.
    pub period: f64,
    pub seed: u64,
}

/// Samples the simulated humidity of `spec` at `probes` every `period`,
/// with additive noise clipped to `[0, 1]`. Deterministic for a given seed.
pub fn generate_synthetic_measurements(
    spec: &ProblemSpec<f64>,
    probes: &[f64],
    opts: &SyntheticOptions,
) -> Result<Vec<MeasurementSeries>> {
    if !(opts.sigma >= 0.0 && opts.sigma.is_finite()) {
        return Err(Error::InvalidParameter { name: "sigma", reason: format!("must be >= 0, got {}", opts.sigma) });
    }
    if !(opts.period > 0.0 && opts.period.is_finite()) {
        return Err(Error::InvalidParameter { name: "period", reason: format!("must be > 0, got {}", opts.period) });
    }
    let run = solve(spec, opts.scheme, probes)?.completed()?;
    let horizon = spec.time.horizon;
    let count = (horizon / opts.period * (1.0 + 1e-12)).floor() as usize + 1;
    let stamps: Vec<f64> = (0..count).map(|k| (k as f64 * opts.period).min(horizon)).collect();
    let noise = Normal::new(0.0, opts.sigma).map_err(|e| Error::InvalidParameter { name: "sigma", reason: e.to_string() })?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let phi_i = spec.initial.humidity;

    probes
        .iter()
        .enumerate()
        .map(|(p, &x)| {
            let samples = stamps
                .iter()
                .map(|&t| {
                    let u = interpolate_series(&run.field.times, &run.probes.series[p], t);
                    let clean = relative_humidity(u, phi_i)?.phi;
                    let e = if opts.sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
                    Ok((t, (clean + e).clamp(0.0, 1.0)))
                })
                .collect::<Result<Vec<_>>>()?;
            MeasurementSeries::new(x, samples)
        })
        .collect()
}
