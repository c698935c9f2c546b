use msf_error_analysis::SuppressionModel;
use serde::{Deserialize, Serialize};

/// What one factory run emits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactoryOutput {
    /// One CCZ state per run.
    Ccz,
    /// A pair of T states per run (catalyzed).
    TPair,
    /// A single T state per run.
    TSingle,
}

impl FactoryOutput {
    /// Factory runs needed per Toffoli gate (one CCZ or four T states).
    pub fn runs_per_toffoli(&self) -> f64 {
        match self {
            FactoryOutput::Ccz => 1.0,
            FactoryOutput::TPair => 2.0,
            FactoryOutput::TSingle => 4.0,
        }
    }

    pub fn t_states_per_run(&self) -> u64 {
        match self {
            FactoryOutput::Ccz => 0,
            FactoryOutput::TPair => 2,
            FactoryOutput::TSingle => 1,
        }
    }
}

/// Geometry, cadence, and error behavior of one level-2 factory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactoryModel {
    pub name: String,
    pub inputs_per_run: u32,
    pub output: FactoryOutput,
    pub suppression: SuppressionModel,
    /// Footprint in units of the factory's code distance.
    pub footprint_d: (u32, u32),
    /// Effective (interleaved) depth per run in units of d.
    pub depth_d: f64,
    /// Probability a run is discarded by the factory's own post-selection.
    pub discard_prob: f64,
    /// Level-1 factories feeding the complex.
    pub num_level1_factories: u32,
    /// Output errors poison a reusable catalyst and correlate across runs.
    pub correlated_errors: bool,
}

impl FactoryModel {
    /// The 8T→CCZ factory: 12d x 6d, one CCZ every 5.5d cycles, suppression
    /// 28 eps^2, fed by five level-1 factories.
    pub fn ccz_factory() -> Self {
        FactoryModel {
            name: "ccz".into(),
            inputs_per_run: 8,
            output: FactoryOutput::Ccz,
            suppression: SuppressionModel::new(28, 2),
            footprint_d: (12, 6),
            depth_d: 5.5,
            discard_prob: 0.0,
            num_level1_factories: 5,
            correlated_errors: false,
        }
    }

    /// The T-catalyzed 8T→2T factory: a T pair every 6.5d cycles, the same
    /// 28 eps^2 suppression, four level-1 factories, correlated errors.
    pub fn catalyzed_2t_factory() -> Self {
        FactoryModel {
            name: "c2t".into(),
            inputs_per_run: 8,
            output: FactoryOutput::TPair,
            suppression: SuppressionModel::new(28, 2),
            footprint_d: (12, 6),
            depth_d: 6.5,
            discard_prob: 0.0,
            num_level1_factories: 4,
            correlated_errors: true,
        }
    }

    /// The previous-generation 15-to-1 T factory: 12d x 8d x 6.5d, one T per
    /// run, suppression 35 eps^3.
    pub fn legacy_t_factory() -> Self {
        FactoryModel {
            name: "legacy-t".into(),
            inputs_per_run: 15,
            output: FactoryOutput::TSingle,
            suppression: SuppressionModel::new(35, 3),
            footprint_d: (12, 8),
            depth_d: 6.5,
            discard_prob: 0.0,
            num_level1_factories: 5,
            correlated_errors: false,
        }
    }

    /// Geometric spacetime volume per run, in d^3 cells.
    pub fn cells(&self) -> f64 {
        self.footprint_d.0 as f64 * self.footprint_d.1 as f64 * self.depth_d
    }

    /// Cycles (in units of d) spent per Toffoli gate.
    pub fn toffoli_period_d(&self) -> f64 {
        self.depth_d * self.output.runs_per_toffoli()
    }
}
