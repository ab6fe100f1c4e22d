use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Relative humidity with a flag telling whether it is physically plausible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Humidity<T> {
    pub phi: T,
    pub physical: bool,
}

pub const PHYSICAL_PHI_MAX: f64 = 1.05;

/// `phi = u * phi_i` under isothermal conditions. Values outside `[0, 1.05]`
/// are returned with `physical = false`.
pub fn relative_humidity<T: Real>(u: T, initial_humidity: T) -> Result<Humidity<T>> {
    if !(initial_humidity > T::zero() && initial_humidity < T::one()) {
        return Err(invalid("initial_humidity", format!("must lie in (0, 1), got {initial_humidity}")));
    }
    let phi = u * initial_humidity;
    Ok(Humidity { phi, physical: phi >= T::zero() && phi <= T::lit(PHYSICAL_PHI_MAX) })
}
