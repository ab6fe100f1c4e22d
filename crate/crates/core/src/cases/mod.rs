//! Built-in benchmark problems.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{
    positive_range, AmbientSignal, CoefficientLaw, DimensionalScenario, Grid1D, InitialState, MaterialModel,
    PecletModel, ProblemSpec, RobinBoundary, Side, TimeControls, WATER_VAPOUR_GAS_CONSTANT,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseId {
    LinearS4,
    NonlinearS5,
    GypsumS6,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::LinearS4, CaseId::NonlinearS5, CaseId::GypsumS6];

    pub fn tag(self) -> &'static str {
        match self {
            CaseId::LinearS4 => "linear_s4",
            CaseId::NonlinearS5 => "nonlinear_s5",
            CaseId::GypsumS6 => "gypsum_s6",
        }
    }

    pub fn build<T: Real>(self) -> NamedCase<T> {
        match self {
            CaseId::LinearS4 => build_linear_case(),
            CaseId::NonlinearS5 => build_nonlinear_case(),
            CaseId::GypsumS6 => build_gypsum_case(PecletModel::Constant(T::lit(GYPSUM_PECLET))),
        }
    }
}

impl std::str::FromStr for CaseId {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| invalid("case", format!("unknown case `{s}` (expected linear_s4, nonlinear_s5 or gypsum_s6)")))
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// A benchmark problem with its default discretisation and probe depths.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedCase<T> {
    pub id: CaseId,
    pub spec: ProblemSpec<T>,
    /// Dimensionless probe positions.
    pub probes: Vec<T>,
    pub description: &'static str,
}

fn spec<T: Real>(
    grid: Grid1D<T>,
    time: TimeControls<T>,
    material: MaterialModel<T>,
    peclet: PecletModel<T>,
    left: RobinBoundary<T>,
    right: RobinBoundary<T>,
    humidity: f64,
) -> ProblemSpec<T> {
    ProblemSpec {
        grid,
        time,
        material,
        peclet,
        boundary_left: left,
        boundary_right: right,
        initial: InitialState { u: T::one(), humidity: T::lit(humidity) },
    }
}

fn l<T: Real>(x: f64) -> T {
    T::lit(x)
}

/// Constant coefficients, strong advection, two-frequency ambient forcing.
pub fn build_linear_case<T: Real>() -> NamedCase<T> {
    let left = AmbientSignal::sinusoids(l(1.0), &[(l(0.5), l(24.0)), (l(0.3), l(4.0))]);
    let right = AmbientSignal::sinusoids(l(1.0), &[(l(0.8), l(12.0))]);
    let spec = spec(
        Grid1D::new(2001).expect("static grid"),
        TimeControls::fixed(l(1e-3), l(120.0)).with_decimation(1000),
        MaterialModel::constant(l(47.0), l(1.0)).expect("positive constants"),
        PecletModel::Constant(l(20.0)),
        RobinBoundary::new(Side::Left, l(2.5), left),
        RobinBoundary::new(Side::Right, l(1.0), right),
        0.3,
    );
    NamedCase {
        id: CaseId::LinearS4,
        spec,
        probes: vec![l(0.0), l(0.5), l(1.0)],
        description: "linear advection-diffusion: d = 1, c = 47, Pe = 20, Bi = 2.5 / 1, horizon 120",
    }
}

/// Storage and diffusion with a Gaussian bump near the capillary state.
pub fn build_nonlinear_case<T: Real>() -> NamedCase<T> {
    let storage = CoefficientLaw::new(l(900.0), l(-400.0), l(1e4), l(10.0), l(2.3));
    let diffusion = CoefficientLaw::new(l(1.0), l(0.91), l(600.0), l(10.0), l(2.3));
    // storage turns negative just above u = 2.9; keep the largest positive range
    let (lo, hi) = positive_range(&storage, &diffusion, l(0.0), l(3.0)).expect("positive near u = 0");
    let material = MaterialModel::with_range(storage, diffusion, lo, hi).expect("scanned range is positive");
    let left = AmbientSignal::sinusoids(l(1.0), &[(l(0.5), l(12.0))]);
    let right = AmbientSignal::sinusoids(l(1.0), &[(l(0.85), l(24.0)), (l(0.1), l(0.5))]);
    let spec = spec(
        Grid1D::new(101).expect("static grid"),
        TimeControls::fixed(l(1e-3), l(48.0)).with_decimation(100),
        material,
        PecletModel::Constant(l(10.0)),
        RobinBoundary::new(Side::Left, l(28.75), left),
        RobinBoundary::new(Side::Right, l(4.28), right),
        0.5,
    );
    NamedCase {
        id: CaseId::NonlinearS5,
        spec,
        probes: vec![l(0.0), l(0.5), l(1.0)],
        description: "nonlinear storage and diffusion, Pe = 10, Bi = 28.75 / 4.28, horizon 48",
    }
}

/// Péclet number estimated for the gypsum board.
pub const GYPSUM_PECLET: f64 = 1.8;
/// Dimensionless storage assumed for the gypsum board. Sets the response
/// time: the 12.5 mm probe completes 95 % of the first step after about 10 h.
pub const GYPSUM_STORAGE: f64 = 30.0;
/// Initial and exposure humidities of the 48 h cycle.
pub const GYPSUM_PHI_INITIAL: f64 = 0.3;
pub const GYPSUM_PHI_HIGH: f64 = 0.72;
/// Vapour pressure at 30 % and 23 °C, kept for unit conversion [Pa].
pub const GYPSUM_INITIAL_PRESSURE: f64 = 843.0;

/// Physical data of the gypsum board experiment (one hour time unit).
pub fn gypsum_scenario<T: Real>() -> DimensionalScenario<T> {
    DimensionalScenario {
        length: l(0.0375),
        reference_time: l(3600.0),
        reference_diffusion: l(5.6e-11),
        initial_vapour_pressure: l(GYPSUM_INITIAL_PRESSURE),
        temperature: l(296.15),
        gas_constant: l(WATER_VAPOUR_GAS_CONSTANT),
        velocity: l(4e-4),
        h_left: l(2.41e-8),
        h_right: l(2.41e-8),
        liquid_flux_left: l(0.0),
        initial_humidity: l(GYPSUM_PHI_INITIAL),
    }
}

/// Gypsum board under a 30 - 72 - 30 % cycle: both faces see the same
/// step signal, switching at 24 h. The walls exchange by diffusion only, so
/// the ambient is a steady state; `RobinBoundary::with_advective` switches
/// to the total-flux balance.
pub fn build_gypsum_case<T: Real>(peclet: PecletModel<T>) -> NamedCase<T> {
    let scenario = gypsum_scenario::<T>();
    let biot = scenario.biot(scenario.h_left);
    let high = l::<T>(GYPSUM_PHI_HIGH / GYPSUM_PHI_INITIAL);
    let ambient = AmbientSignal::Steps { starts: vec![l(0.0), l(24.0)], values: vec![high, T::one()] };
    let spec = spec(
        Grid1D::new(101).expect("static grid"),
        TimeControls::adaptive(l(1e-2), l(48.0), l(crate::model::DEFAULT_SAFETY)).with_decimation(10),
        MaterialModel::constant(l(GYPSUM_STORAGE), l(1.0)).expect("positive constants"),
        peclet,
        RobinBoundary::new(Side::Left, biot, ambient.clone()),
        RobinBoundary::new(Side::Right, biot, ambient),
        GYPSUM_PHI_INITIAL,
    );
    NamedCase {
        id: CaseId::GypsumS6,
        spec,
        probes: vec![l(1.0 / 3.0), l(2.0 / 3.0)],
        description: "gypsum board, 48 h adsorption-desorption cycle, probes at 12.5 and 25 mm",
    }
}

/// Probe depths of the gypsum case [m].
pub const GYPSUM_PROBE_DEPTHS: [f64; 2] = [0.0125, 0.025];
