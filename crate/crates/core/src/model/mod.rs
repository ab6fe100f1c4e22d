//! Domain types: grid, time controls, material laws, walls, problem and solution.

mod boundary;
mod dimensional;
mod field;
mod grid;
mod humidity;
mod material;
mod peclet;
mod problem;
mod time;

pub use boundary::{eval_boundary_signal, AmbientSignal, RobinBoundary, Side, Sinusoid};
pub use dimensional::{
    nondimensionalize, DimensionalScenario, PhysicalAmbient, PhysicalMaterial, WATER_VAPOUR_GAS_CONSTANT,
};
pub use field::SolutionField;
pub use grid::Grid1D;
pub use humidity::{relative_humidity, Humidity, PHYSICAL_PHI_MAX};
pub use material::{positive_range, CoefficientLaw, MaterialModel, DEFAULT_RANGE};
pub use peclet::{PecletModel, PecletSegment};
pub use problem::{InitialState, ProblemSpec};
pub use time::{StepMode, TimeControls, DEFAULT_SAFETY};
