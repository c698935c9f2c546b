use serde::{Deserialize, Serialize};

use crate::PipelineError;

/// The level-2 consumer at the center of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsumerKind {
    /// CCZ factory: 8 inputs, one CCZ every 5.5d cycles.
    Ccz,
    /// T-catalyzed factory: 8 inputs, a T pair every 6.5d cycles, with a
    /// reusable catalyst that detected errors force out.
    C2t,
}

impl ConsumerKind {
    pub fn period_d(&self) -> f64 {
        match self {
            ConsumerKind::Ccz => 5.5,
            ConsumerKind::C2t => 6.5,
        }
    }

    pub fn inputs_per_run(&self) -> u32 {
        8
    }
}

fn default_version() -> u32 {
    1
}
fn default_buffer_capacity() -> u32 {
    2
}
fn default_bootstrap_delay() -> f64 {
    10.0
}

/// Declarative description of one pipeline simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    pub num_level1: u32,
    /// Per-state completion period of one level-1 factory, in d cycles
    /// (3.25 for the legacy layout, 3.125 for the improved one).
    pub level1_period_d: f64,
    pub level1_discard_prob: f64,
    /// Hallway buffer slots per level-1 factory.
    #[serde(default = "default_buffer_capacity")]
    pub buffer_capacity: u32,
    pub consumer: ConsumerKind,
    /// Probability a consumed input batch hides an undetected bad output
    /// (poisons the catalyst in the C2t consumer).
    #[serde(default)]
    pub ccz_error_prob: f64,
    /// Per-input level-1 state error rate; an odd number of bad inputs in a
    /// run is detected and discards the run (and the catalyst, for C2t).
    #[serde(default)]
    pub t1_error_prob: f64,
    /// Stall after a catalyst discard while a fresh catalyst is made the
    /// slow way.
    #[serde(default = "default_bootstrap_delay")]
    pub bootstrap_delay_d: f64,
    /// Extra delay modeling cross-complex routing of the odd factory's
    /// output; zero by default.
    #[serde(default)]
    pub routing_latency_d: f64,
    pub horizon_d: f64,
    #[serde(default)]
    pub seed: u64,
}

impl PipelineConfig {
    /// Five legacy level-1 factories feeding the CCZ factory.
    pub fn ccz_default() -> Self {
        PipelineConfig {
            version: 1,
            num_level1: 5,
            level1_period_d: 3.25,
            level1_discard_prob: 0.03,
            buffer_capacity: 2,
            consumer: ConsumerKind::Ccz,
            ccz_error_prob: 0.0,
            t1_error_prob: 0.0,
            bootstrap_delay_d: 10.0,
            routing_latency_d: 0.0,
            horizon_d: 1e5,
            seed: 1,
        }
    }

    /// Four improved level-1 factories feeding the catalyzed T factory.
    pub fn c2t_default() -> Self {
        PipelineConfig {
            version: 1,
            num_level1: 4,
            level1_period_d: 3.125,
            level1_discard_prob: 0.03,
            buffer_capacity: 2,
            consumer: ConsumerKind::C2t,
            ccz_error_prob: 0.0,
            t1_error_prob: 0.0,
            bootstrap_delay_d: 10.0,
            routing_latency_d: 0.0,
            horizon_d: 1e5,
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.num_level1 == 0 {
            return Err(PipelineError::BadConfig("num_level1 must be positive".into()));
        }
        if !self.level1_period_d.is_finite() || self.level1_period_d <= 0.0 {
            return Err(PipelineError::BadConfig("level1_period_d must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.level1_discard_prob) {
            return Err(PipelineError::BadConfig(
                "level1_discard_prob must lie in [0, 1)".into(),
            ));
        }
        if self.buffer_capacity == 0 {
            return Err(PipelineError::BadConfig("buffer_capacity must be at least 1".into()));
        }
        if self.num_level1 * self.buffer_capacity < self.consumer.inputs_per_run() {
            return Err(PipelineError::BadConfig(format!(
                "{} producers with {} buffer slots each can never assemble {} inputs",
                self.num_level1,
                self.buffer_capacity,
                self.consumer.inputs_per_run()
            )));
        }
        for (name, p) in [
            ("ccz_error_prob", self.ccz_error_prob),
            ("t1_error_prob", self.t1_error_prob),
        ] {
            if !(0.0..1.0).contains(&p) {
                return Err(PipelineError::BadConfig(format!("{name} must lie in [0, 1)")));
            }
        }
        if self.horizon_d < 0.0 {
            return Err(PipelineError::BadConfig("horizon_d must be nonnegative".into()));
        }
        Ok(())
    }
}
