//! One-dimensional advection-diffusion of vapour pressure in porous walls.
//!
//! The core types are generic over the scalar [`Real`]; `f64` aliases are
//! provided below for the common case.

mod error;
pub mod analysis;
pub mod cases;
pub mod config;
pub mod driver;
pub mod metrics;
pub mod model;
mod scalar;
pub mod schemes;

pub use error::{Error, Result};
pub use model::*;
pub use scalar::{lit, Real};
pub use schemes::Scheme;

pub type Grid = model::Grid1D<f64>;
pub type Problem = model::ProblemSpec<f64>;
pub type Material = model::MaterialModel<f64>;
pub type Peclet = model::PecletModel<f64>;
pub type Boundary = model::RobinBoundary<f64>;
pub type Ambient = model::AmbientSignal<f64>;
pub type Field = model::SolutionField<f64>;
pub type Time = model::TimeControls<f64>;
