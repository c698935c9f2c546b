use serde::{Deserialize, Serialize};

use crate::ModelError;

/// Physical-level assumptions feeding the topological error model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalAssumptions {
    /// Physical gate error rate.
    pub gate_error: f64,
    /// Error rate of freshly injected level-0 T states.
    pub injection_error: f64,
    /// Surface code cycle time in seconds.
    pub cycle_time_s: f64,
    /// Per-cell prefactor A in p(d) = A (gate_error/threshold)^{(d+1)/2}.
    pub topological_prefactor: f64,
    /// Threshold error rate of the code.
    pub topological_threshold: f64,
}

impl Default for PhysicalAssumptions {
    fn default() -> Self {
        PhysicalAssumptions {
            gate_error: 1e-3,
            injection_error: 1e-3,
            cycle_time_s: 1e-6,
            topological_prefactor: 1.0,
            topological_threshold: 1e-2,
        }
    }
}

impl PhysicalAssumptions {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.gate_error > 0.0 && self.gate_error <= 1e-2) {
            return Err(ModelError::BadGateError(self.gate_error));
        }
        Ok(())
    }
}

/// Code distances for the three levels of the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceAssignment {
    /// Level-0 injection distance.
    pub d0: u32,
    /// Level-1 factory distance (the half-distance tier).
    pub d1: u32,
    /// Distance for the level-2 factory and everything else.
    pub d2: u32,
}

impl Default for DistanceAssignment {
    fn default() -> Self {
        DistanceAssignment {
            d0: 7,
            d1: 15,
            d2: 31,
        }
    }
}

impl DistanceAssignment {
    pub fn new(d0: u32, d1: u32, d2: u32) -> Result<Self, ModelError> {
        let a = DistanceAssignment { d0, d1, d2 };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let ok = |d: u32| d >= 3 && d % 2 == 1;
        if !(ok(self.d0) && ok(self.d1) && ok(self.d2) && self.d0 <= self.d1 && self.d1 <= self.d2)
        {
            return Err(ModelError::BadDistances {
                d0: self.d0,
                d1: self.d1,
                d2: self.d2,
            });
        }
        Ok(())
    }
}

/// Effective cell count of the level-0 T gate, calibrated so that at the
/// default assumptions a distance-7 level-0 gate doubles the 1e-3 injected
/// error (10 x 1e-4 per cell).
pub const LEVEL0_INJECTION_CELLS: f64 = 10.0;

/// Effective cell count of the level-1 T factory, calibrated so that at the
/// default assumptions a distance-15 level-1 factory adds 1.12e-6
/// topological error per output state. This folds a per-cell prefactor of
/// roughly 0.18 into the geometric 12x8x6.5 = 624-cell volume.
pub const LEVEL1_FACTORY_CELLS: f64 = 112.0;

/// Geometric cell count of the CCZ factory, 12 x 6 footprint times 5.5
/// depth. At distance 31 its contribution is far below the distillation
/// term, which is what makes the level-2 stage distillation limited.
pub const CCZ_FACTORY_CELLS: f64 = 396.0;

/// Per-cell logical error rate p(d) = A (gate_error/threshold)^{(d+1)/2}.
/// Monotone decreasing in d and increasing in gate_error; at threshold it
/// degenerates to the prefactor A.
pub fn logical_cell_error(d: u32, assumptions: &PhysicalAssumptions) -> f64 {
    let ratio = assumptions.gate_error / assumptions.topological_threshold;
    assumptions.topological_prefactor * ratio.powi(d.div_ceil(2) as i32)
}

/// Which effects the chain accounts for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Code distances large enough that only distillation error survives.
    DistillationLimited,
    /// Minimal code distances: topological contributions are added at every
    /// level.
    MinimalDistance,
}

/// Chained error rates through the pipeline.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ErrorChain {
    pub regime: Regime,
    /// Level-0 T-state error after the level-0 gate.
    pub eps_t0_effective: f64,
    /// Level-1 output error (15-to-1, suppression 35 eps^3).
    pub eps_t1: f64,
    /// Level-2 CCZ output error (suppression 28 eps^2).
    pub eps_ccz: f64,
}

impl ErrorChain {
    pub fn states_before_failure(&self) -> f64 {
        1.0 / self.eps_ccz
    }
}

/// Run the two-level error chain.
pub fn chain_errors(
    regime: Regime,
    distances: &DistanceAssignment,
    assumptions: &PhysicalAssumptions,
) -> Result<ErrorChain, ModelError> {
    distances.validate()?;
    assumptions.validate()?;
    let chain = match regime {
        Regime::DistillationLimited => {
            let t0 = assumptions.injection_error;
            let t1 = 35.0 * t0.powi(3);
            let ccz = 28.0 * t1.powi(2);
            ErrorChain {
                regime,
                eps_t0_effective: t0,
                eps_t1: t1,
                eps_ccz: ccz,
            }
        }
        Regime::MinimalDistance => {
            let t0 = assumptions.injection_error
                + LEVEL0_INJECTION_CELLS * logical_cell_error(distances.d0, assumptions);
            let t1 = 35.0 * t0.powi(3)
                + LEVEL1_FACTORY_CELLS * logical_cell_error(distances.d1, assumptions);
            let ccz = 28.0 * t1.powi(2)
                + CCZ_FACTORY_CELLS * logical_cell_error(distances.d2, assumptions);
            ErrorChain {
                regime,
                eps_t0_effective: t0,
                eps_t1: t1,
                eps_ccz: ccz,
            }
        }
    };
    Ok(chain)
}

/// Probability a level-1 factory run detects an error and discards: fifteen
/// inputs failing independently at the effective level-0 rate, to leading
/// order. Defaults give 15 x 2e-3 = 3%.
pub fn level1_discard_probability(
    distances: &DistanceAssignment,
    assumptions: &PhysicalAssumptions,
) -> Result<f64, ModelError> {
    let chain = chain_errors(Regime::MinimalDistance, distances, assumptions)?;
    Ok(15.0 * chain.eps_t0_effective)
}
