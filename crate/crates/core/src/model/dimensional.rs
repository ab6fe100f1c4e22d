//! Physical scenario and its reduction to the dimensionless problem.

use serde::{Deserialize, Serialize};

use super::{
    AmbientSignal, CoefficientLaw, Grid1D, InitialState, MaterialModel, PecletModel, ProblemSpec, RobinBoundary,
    Side, TimeControls,
};
use crate::error::{invalid, Result};
use crate::scalar::Real;

pub const WATER_VAPOUR_GAS_CONSTANT: f64 = 461.5;

/// Physical parameters of a wall (SI units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct DimensionalScenario<T> {
    /// Wall thickness `L` [m].
    pub length: T,
    /// Reference time `t0` [s].
    pub reference_time: T,
    /// Reference moisture transport coefficient `d_m^0` [s].
    pub reference_diffusion: T,
    /// Initial vapour pressure `P_v^i` [Pa].
    pub initial_vapour_pressure: T,
    /// Temperature [K].
    pub temperature: T,
    /// Water vapour gas constant `R_v` [J/kg/K].
    #[serde(default = "rv")]
    pub gas_constant: T,
    /// Mass average velocity [m/s].
    #[serde(default)]
    pub velocity: T,
    /// Surface transfer coefficients [s/m].
    pub h_left: T,
    pub h_right: T,
    /// Liquid flux on the left wall [kg/m^2/s].
    #[serde(default)]
    pub liquid_flux_left: T,
    pub initial_humidity: T,
}

fn rv<T: Real>() -> T {
    T::lit(WATER_VAPOUR_GAS_CONSTANT)
}

/// Storage [kg/m^3/Pa] and transport [s] laws in physical units, as functions of `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct PhysicalMaterial<T> {
    pub storage: CoefficientLaw<T>,
    pub diffusion: CoefficientLaw<T>,
    #[serde(default)]
    pub admissible_range: Option<(T, T)>,
}

/// Ambient vapour pressures [Pa] with time in seconds, plus whether the
/// advective flux enters the wall balance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct PhysicalAmbient<T> {
    pub left: AmbientSignal<T>,
    pub right: AmbientSignal<T>,
    #[serde(default)]
    pub advective: bool,
}

impl<T: Real> DimensionalScenario<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("length", self.length),
            ("reference_time", self.reference_time),
            ("reference_diffusion", self.reference_diffusion),
            ("initial_vapour_pressure", self.initial_vapour_pressure),
            ("temperature", self.temperature),
            ("gas_constant", self.gas_constant),
        ];
        for (name, v) in positive {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("must be strictly positive, got {v}")));
            }
        }
        for (name, v) in [("h_left", self.h_left), ("h_right", self.h_right)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(invalid(name, format!("must be non-negative, got {v}")));
            }
        }
        if !self.velocity.is_finite() || !self.liquid_flux_left.is_finite() {
            return Err(invalid("velocity", "velocity and liquid flux must be finite"));
        }
        if !(self.initial_humidity > T::zero() && self.initial_humidity < T::one()) {
            return Err(invalid("initial_humidity", "must lie in (0, 1)"));
        }
        Ok(())
    }

    /// `c_m L^2 / (d_m^0 t0)`
    pub fn storage_scale(&self) -> T {
        self.length * self.length / (self.reference_diffusion * self.reference_time)
    }

    /// `v L / (R_v T d_m^0)`
    pub fn peclet(&self) -> T {
        self.velocity * self.length / (self.gas_constant * self.temperature * self.reference_diffusion)
    }

    /// `h L / d_m^0`
    pub fn biot(&self, h: T) -> T {
        h * self.length / self.reference_diffusion
    }

    /// `g L / (d_m^0 P_v^i)`
    pub fn liquid_flux(&self) -> T {
        self.liquid_flux_left * self.length / (self.reference_diffusion * self.initial_vapour_pressure)
    }

    pub fn to_dimensionless_pressure(&self, pv: T) -> T {
        pv / self.initial_vapour_pressure
    }

    pub fn to_vapour_pressure(&self, u: T) -> T {
        u * self.initial_vapour_pressure
    }

    pub fn to_dimensionless_position(&self, x: T) -> T {
        x / self.length
    }

    pub fn to_dimensionless_time(&self, t: T) -> T {
        t / self.reference_time
    }
}

/// Builds the dimensionless problem from physical data.
///
/// Grid and time controls are already dimensionless.
pub fn nondimensionalize<T: Real>(
    scenario: &DimensionalScenario<T>,
    material: &PhysicalMaterial<T>,
    ambient: &PhysicalAmbient<T>,
    grid: Grid1D<T>,
    time: TimeControls<T>,
) -> Result<ProblemSpec<T>> {
    scenario.validate()?;
    let storage = material.storage.scaled(scenario.storage_scale());
    let diffusion = material.diffusion.scaled(T::one() / scenario.reference_diffusion);
    let material = match material.admissible_range {
        Some((lo, hi)) => MaterialModel::with_range(storage, diffusion, lo, hi)?,
        None => MaterialModel::new(storage, diffusion)?,
    };
    let value_scale = T::one() / scenario.initial_vapour_pressure;
    let left = RobinBoundary::new(
        Side::Left,
        scenario.biot(scenario.h_left),
        ambient.left.rescaled(value_scale, scenario.reference_time),
    )
    .with_liquid_flux(scenario.liquid_flux())
    .with_advective(ambient.advective);
    let right = RobinBoundary::new(
        Side::Right,
        scenario.biot(scenario.h_right),
        ambient.right.rescaled(value_scale, scenario.reference_time),
    )
    .with_advective(ambient.advective);
    let spec = ProblemSpec {
        grid,
        time,
        material,
        peclet: PecletModel::Constant(scenario.peclet()),
        boundary_left: left,
        boundary_right: right,
        initial: InitialState { u: T::one(), humidity: scenario.initial_humidity },
    };
    spec.validate()?;
    Ok(spec)
}
