//! Time marching, probe sampling and steady-state solves.

mod probes;
mod run;
mod steady;
mod stepper;

pub use probes::{sample_row, ProbeSet};
pub use run::{solve, solve_with, Run, RunReport, RunStatus, SolveOptions, MIN_STEP};
pub use steady::{steady_state_solve, steady_state_solve_with, SteadyOptions};

pub(crate) use run::march;
pub(crate) use stepper::Integrator;
