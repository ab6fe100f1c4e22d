use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative humidity samples at one probe depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSeries {
    /// Probe depth, dimensionless unless the caller says otherwise.
    pub x: f64,
    /// `(t, phi)` with strictly increasing `t` and `phi` in `[0, 1]`.
    pub samples: Vec<(f64, f64)>,
    /// Optional `(t, T)` temperature record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<Vec<(f64, f64)>>,
}

impl MeasurementSeries {
    pub fn new(x: f64, samples: Vec<(f64, f64)>) -> Result<Self> {
        let s = Self { x, samples, temperature: None };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x.is_finite() {
            return Err(Error::Data(format!("probe depth {} is not finite", self.x)));
        }
        if self.samples.is_empty() {
            return Err(Error::Data(format!("series at x = {} has no samples", self.x)));
        }
        for w in self.samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Data(format!("time stamps at x = {} are not strictly increasing near t = {}", self.x, w[1].0)));
            }
        }
        if let Some(&(t, phi)) = self.samples.iter().find(|(t, phi)| !t.is_finite() || !(0.0..=1.0).contains(phi)) {
            return Err(Error::Data(format!("sample (t = {t}, phi = {phi}) at x = {} is outside phi in [0, 1]", self.x)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }
}

/// Linear interpolation of `values` over increasing `times`, clamped at the ends.
pub fn interpolate_series(times: &[f64], values: &[f64], t: f64) -> f64 {
    debug_assert_eq!(times.len(), values.len());
    let n = times.len();
    if n == 1 || t <= times[0] {
        return values[0];
    }
    if t >= times[n - 1] {
        return values[n - 1];
    }
    let k = times.partition_point(|&s| s <= t);
    let (t0, t1) = (times[k - 1], times[k]);
    let w = (t - t0) / (t1 - t0);
    values[k - 1] + w * (values[k] - values[k - 1])
}

#[derive(Debug, Deserialize)]
struct Row {
    t: f64,
    x: f64,
    phi: f64,
    #[serde(rename = "T", default)]
    temperature: Option<f64>,
}

/// Reads `t,x,phi[,T]` rows, grouped by depth in order of first appearance.
/// `scale_t` and `scale_x` divide the stamps and depths on the way in.
pub fn read_measurements_csv<R: Read>(reader: R, scale_t: f64, scale_x: f64) -> Result<Vec<MeasurementSeries>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out: Vec<MeasurementSeries> = Vec::new();
    for (line, row) in rdr.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::Data(format!("row {}: {e}", line + 2)))?;
        let (t, x) = (row.t / scale_t, row.x / scale_x);
        let idx = match out.iter().position(|s| s.x == x) {
            Some(i) => i,
            None => {
                out.push(MeasurementSeries { x, samples: Vec::new(), temperature: None });
                out.len() - 1
            }
        };
        let series = &mut out[idx];
        series.samples.push((t, row.phi));
        if let Some(temp) = row.temperature {
            series.temperature.get_or_insert_with(Vec::new).push((t, temp));
        }
    }
    if out.is_empty() {
        return Err(Error::Data("measurement file has no rows".into()));
    }
    for s in &out {
        s.validate()?;
    }
    Ok(out)
}

/// Writes `t,x,phi[,T]` with 17 significant digits, multiplying stamps and
/// depths by `scale_t` and `scale_x`.
pub fn write_measurements_csv<W: Write>(
    mut writer: W,
    data: &[MeasurementSeries],
    scale_t: f64,
    scale_x: f64,
) -> Result<()> {
    let with_t = data.iter().any(|s| s.temperature.is_some());
    let io = |e: std::io::Error| Error::Data(e.to_string());
    writeln!(writer, "{}", if with_t { "t,x,phi,T" } else { "t,x,phi" }).map_err(io)?;
    for s in data {
        let temps = s.temperature.as_deref().unwrap_or(&[]);
        for (i, &(t, phi)) in s.samples.iter().enumerate() {
            write!(writer, "{:.16e},{:.16e},{:.16e}", t * scale_t, s.x * scale_x, phi).map_err(io)?;
            if with_t {
                match temps.get(i).filter(|p| p.0 == t) {
                    Some(&(_, temp)) => write!(writer, ",{temp:.16e}").map_err(io)?,
                    None => write!(writer, ",").map_err(io)?,
                }
            }
            writeln!(writer).map_err(io)?;
        }
    }
    Ok(())
}
