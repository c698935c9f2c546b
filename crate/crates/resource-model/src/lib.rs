//! Resource arithmetic for the factory complexes: chained error rates
//! through the injection → level-1 → level-2 pipeline in two regimes,
//! code-distance bookkeeping, and footprint/runtime/success-probability
//! estimates for gate-count workloads.
//!
//! The topological error model is a per-cell rate
//! `p(d) = A · (gate_error / threshold)^{(d+1)/2}` with threshold 1e-2,
//! where one cell is a d×d patch for d cycles. The absolute normalization is
//! carried by effective cell counts calibrated against two anchors at the
//! default assumptions: the distance-7 level-0 T gate doubles a 1e-3
//! injected error, and the distance-15 level-1 factory adds 1.12e-6 error
//! per output state (several times its own distillation error, and the value
//! that makes the level-1 total come out at 1.4e-6).

mod chain;
mod estimate;
mod factory;
mod workload;

pub use chain::{
    chain_errors, level1_discard_probability, logical_cell_error, DistanceAssignment, ErrorChain,
    PhysicalAssumptions, Regime, CCZ_FACTORY_CELLS, LEVEL0_INJECTION_CELLS, LEVEL1_FACTORY_CELLS,
};
pub use estimate::{estimate, toffoli_speedup, ResourceEstimate, SECONDS_PER_YEAR};
pub use factory::{FactoryModel, FactoryOutput};
pub use workload::{factoring_workload, Workload};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("code distances must be odd, at least 3, and ordered d0 <= d1 <= d2 (got {d0}, {d1}, {d2})")]
    BadDistances { d0: u32, d1: u32, d2: u32 },

    #[error("factoring workloads start at 8 bits (got {0})")]
    BitsTooSmall(u32),

    #[error("gate error {0} outside (0, 1e-2]")]
    BadGateError(f64),

    #[error("error budget {0} outside (0, 1)")]
    BadErrorBudget(f64),
}
