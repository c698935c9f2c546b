use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use msf_sim_core::Circuit;

use crate::enumerate::{classify, Class};
use crate::{AnalysisError, ClassifierPath, EnumerateOptions};

/// Empirical rates from sampled per-site errors, with binomial standard
/// errors.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MonteCarloStats {
    pub trials: u64,
    pub rejection_rate: f64,
    pub rejection_std_err: f64,
    pub harmful_accept_rate: f64,
    pub harmful_std_err: f64,
}

/// Sample `trials` runs with independent per-site Z errors of probability
/// `eps` and classify each. Per-trial randomness is keyed off `seed` and the
/// trial index, so results are deterministic under any thread schedule.
///
/// Classification uses the Pauli-frame path when the circuit supports it
/// (validated elsewhere against the state-vector path) and falls back to
/// state-vector re-simulation otherwise.
pub fn monte_carlo_validate(
    circuit: &Circuit,
    eps: f64,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloStats, AnalysisError> {
    if circuit.injection_sites.is_empty() {
        return Err(AnalysisError::NoInjectionSites);
    }
    if circuit.outputs.is_empty() {
        return Err(AnalysisError::NoReference);
    }
    let labels: Vec<String> = circuit
        .injection_sites
        .iter()
        .map(|s| s.label.clone())
        .collect();

    // Probe the frame path once on the heaviest pattern shape.
    let all_sites: BTreeSet<String> = labels.iter().cloned().collect();
    let frame_ok = crate::frame::classify_by_frame(circuit, &all_sites).is_ok();
    let path = if frame_ok {
        ClassifierPath::PauliFrame
    } else {
        ClassifierPath::StateVector
    };
    let options = EnumerateOptions {
        max_weight: labels.len(),
        harm_tolerance: 1e-6,
        path,
    };

    let counts: Result<Vec<(u64, u64)>, AnalysisError> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut injected = BTreeSet::new();
            for label in &labels {
                if rng.gen::<f64>() < eps {
                    injected.insert(label.clone());
                }
            }
            let class = if injected.is_empty() {
                Class::Benign
            } else {
                classify(circuit, &injected, options)?
            };
            Ok(match class {
                Class::Detected => (1, 0),
                Class::Harmful => (0, 1),
                Class::Benign => (0, 0),
            })
        })
        .collect();

    let (mut rejected, mut harmful) = (0u64, 0u64);
    for (r, h) in counts? {
        rejected += r;
        harmful += h;
    }
    let n = trials as f64;
    let p_rej = rejected as f64 / n;
    let p_harm = harmful as f64 / n;
    Ok(MonteCarloStats {
        trials,
        rejection_rate: p_rej,
        rejection_std_err: (p_rej * (1.0 - p_rej) / n).sqrt(),
        harmful_accept_rate: p_harm,
        harmful_std_err: (p_harm * (1.0 - p_harm) / n).sqrt(),
    })
}
