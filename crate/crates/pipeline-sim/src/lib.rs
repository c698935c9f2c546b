//! Discrete-event simulation of a factory complex: level-1 producers with
//! stochastic discards, per-hallway buffers, a level-2 consumer (CCZ or
//! T-catalyzed), and catalyst-poisoning dynamics.
//!
//! Time is measured in units of d surface-code cycles. Producers complete an
//! attempt every `level1_period_d`, succeeding with probability
//! `1 - level1_discard_prob`; successes fill the producer's hallway buffer,
//! and a producer whose buffer is full idles until space frees (no state is
//! ever silently dropped). The consumer fires as soon as its input count is
//! available and its own period has elapsed.

mod catalyst;
mod config;
mod sim;

pub use catalyst::{catalyst_error_stats, mean_bad_closed_form, p_any_bad_closed_form, CatalystStats};
pub use config::{ConsumerKind, PipelineConfig};
pub use sim::{simulate, PipelineStats};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum PipelineError {
    #[error("discard probability must be below 1")]
    DiscardProbabilityIsOne,

    #[error("invalid pipeline config: {0}")]
    BadConfig(String),
}

/// Mean spacing between level-1 outputs once discards are folded in:
/// period / (1 - discard probability).
pub fn level1_effective_period(
    period_d: f64,
    discard_prob: f64,
) -> Result<f64, PipelineError> {
    if !(0.0..1.0).contains(&discard_prob) {
        return Err(PipelineError::DiscardProbabilityIsOne);
    }
    Ok(period_d / (1.0 - discard_prob))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_period_arithmetic() {
        let p = level1_effective_period(3.25, 0.03).unwrap();
        assert!((p - 3.35).abs() < 0.01, "{p}");
        assert_eq!(level1_effective_period(3.25, 0.0).unwrap(), 3.25);
        // With a 3% discard a 6.25d producer pair-rate still beats the 6.5d
        // consumer period.
        let p = level1_effective_period(6.25, 0.03).unwrap();
        assert!((p - 6.443).abs() < 1e-3);
        assert!(p < 6.5);
    }

    #[test]
    fn effective_period_rejects_certain_discard() {
        assert!(level1_effective_period(3.25, 1.0).is_err());
    }
}
