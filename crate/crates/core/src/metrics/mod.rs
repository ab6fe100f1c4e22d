//! Error functionals, reference solutions and observed orders.

mod convergence;
mod error;
mod reference;

pub use convergence::{convergence_study, observed_order, ConvergenceStudy, ConvergenceTable, Vary};
pub use error::{l2_errors, max_difference, ErrorReport};
pub use reference::{
    reference_solution, refined_spec, ReferenceKind, verified_reference, verified_reference_with, ReferenceOptions, RichardsonCheck,
};
