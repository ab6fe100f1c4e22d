//! Sensitivity coefficients, Péclet estimation and synthetic measurements.
//!
//! Everything here works on `f64` problems.

mod fit;
mod measurement;
mod sensitivity;
mod synthetic;

pub use fit::{fit_peclet_constant, fit_peclet_piecewise, misfit, FitOptions, PecletFit};
pub use measurement::{interpolate_series, read_measurements_csv, write_measurements_csv, MeasurementSeries};
pub use sensitivity::{integrated_abs, sensitivity, SensitivityParam, SensitivitySeries, DEFAULT_DELTA};
pub use synthetic::{generate_synthetic_measurements, SyntheticOptions};
