//! Constructors for the magic-state factory circuits under analysis.
//!
//! Each builder returns a [`Circuit`](msf_sim_core::Circuit) with stable
//! qubit-role labels, labeled T-injection sites, and declared reference
//! outputs, ready for exact simulation and exhaustive error injection:
//!
//! - [`build_ccz_factory`]: the 8T→CCZ distillation circuit (post-selected,
//!   detects any single Z error, passes all pairs),
//! - [`build_fifteen_to_one`]: 15-to-1 T distillation on the 15-qubit
//!   Reed-Muller code,
//! - [`build_c2t_simple`] / [`build_c2t_surgery`]: the T-catalyzed
//!   CCZ→3T transformation, in inline and measurement-based forms,
//! - [`build_phase_catalysis`]: the generalized two-target phase catalysis
//!   circuit for an arbitrary angle θ.

mod catalysis;
mod ccz;
mod reed_muller;

pub use catalysis::{
    build_c2t_simple, build_c2t_simple_with, build_c2t_surgery, build_c2t_surgery_with,
    build_phase_catalysis, build_phase_catalysis_with, phase_catalysis_t_cost, C2tInput,
    PhaseCatalysisPrep, SQRT_T_DEGREES,
};
pub use ccz::build_ccz_factory;
pub use reed_muller::{build_fifteen_to_one, x_generator_support, z_generator_supports};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum BuildError {
    #[error("phase catalysis angle {theta} degrees outside (0, 90]")]
    ThetaOutOfRange { theta: f64 },
}
