//! Spatial discretisations and single-step integrators.

mod bernoulli;
mod cn;
mod flux;
mod operator;
mod sg;
mod tridiag;

use serde::{Deserialize, Serialize};

pub use bernoulli::{bernoulli, bernoulli_pair};
pub use cn::{cn_assemble_linear, cn_imex_assemble, cn_imex_step, cn_step};
pub use flux::{
    right_wall_flux, robin_wall_flux, sg_boundary_flux_left, sg_boundary_flux_right, sg_interface_flux,
    sg_interpolate, upwind_weights, InterfaceFlux, SchemeCoefficients,
};
pub use operator::{assemble_backward_euler, assemble_trapezoid, ExplicitStencil, FaceFlux, SpatialOperator};
pub use sg::{peclet_cfl_bound, sg_cfl_max_dt, sg_step, sg_trapezoid_step};
pub use tridiag::{thomas_solve, TridiagonalSystem};


/// Time integrator selectable by users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Explicit Scharfetter-Gummel (fixed or CFL-adaptive steps).
    Sg,
    /// Classical Crank-Nicolson with upwind advection (constant material).
    Cn,
    /// Crank-Nicolson with coefficients frozen at the current layer.
    CnImex,
}

impl Scheme {
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Sg => "sg",
            Scheme::Cn => "cn",
            Scheme::CnImex => "cn_imex",
        }
    }

    pub fn face_flux(self) -> FaceFlux {
        match self {
            Scheme::Sg => FaceFlux::Fitted,
            Scheme::Cn | Scheme::CnImex => FaceFlux::Upwind,
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sg" => Ok(Scheme::Sg),
            "cn" => Ok(Scheme::Cn),
            "cn_imex" | "imex" => Ok(Scheme::CnImex),
            other => Err(crate::error::invalid("scheme", format!("unknown scheme `{other}`"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}
