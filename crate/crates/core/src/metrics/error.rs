use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SolutionField;
use crate::scalar::Real;

/// L2 discrepancy between two fields sharing nodes and stamps.
///
/// `global^2` is the mean of `profile^2` over nodes and of `series^2` over
/// layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub global: f64,
    /// Per node, root mean square over layers.
    pub profile: Vec<f64>,
    /// Per stored layer, root mean square over nodes.
    pub series: Vec<f64>,
    pub dx: f64,
    pub dt: f64,
    pub scheme: String,
}

pub fn l2_errors<T: Real>(num: &SolutionField<T>, reference: &SolutionField<T>) -> Result<ErrorReport> {
    let (nt, nx) = num.shape();
    if num.shape() != reference.shape() || num.grid != reference.grid {
        let (rt, rx) = reference.shape();
        return Err(Error::ShapeMismatch {
            left: format!("{nt} layers x {nx} nodes"),
            right: format!("{rt} layers x {rx} nodes"),
        });
    }
    let scale = num.final_time().abs().max(T::one()) * T::lit(1e-9);
    if let Some(n) = (0..nt).find(|&n| (num.times[n] - reference.times[n]).abs() > scale) {
        return Err(Error::ShapeMismatch {
            left: format!("stamp {} = {}", n, num.times[n]),
            right: format!("reference stamp {}", reference.times[n]),
        });
    }
    let mut profile = vec![0.0; nx];
    let mut series = vec![0.0; nt];
    let mut total = 0.0;
    for n in 0..nt {
        for j in 0..nx {
            let e = (num.rows[n][j] - reference.rows[n][j]).as_f64();
            let e2 = e * e;
            profile[j] += e2;
            series[n] += e2;
            total += e2;
        }
    }
    profile.iter_mut().for_each(|v| *v = (*v / nt as f64).sqrt());
    series.iter_mut().for_each(|v| *v = (*v / nx as f64).sqrt());
    let dt = if nt > 1 { (num.times[1] - num.times[0]).as_f64() } else { 0.0 };
    Ok(ErrorReport {
        global: (total / (nt * nx) as f64).sqrt(),
        profile,
        series,
        dx: num.grid.dx().as_f64(),
        dt,
        scheme: String::new(),
    })
}

/// Sup-norm distance of two fields on shared nodes and stamps.
pub fn max_difference<T: Real>(a: &SolutionField<T>, b: &SolutionField<T>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch { left: format!("{:?}", a.shape()), right: format!("{:?}", b.shape()) });
    }
    Ok(a.rows
        .iter()
        .flatten()
        .zip(b.rows.iter().flatten())
        .fold(0.0_f64, |m, (x, y)| m.max((*x - *y).abs().as_f64())))
}
