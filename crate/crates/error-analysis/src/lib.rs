//! Exhaustive Z-error injection over a circuit's T sites, classification of
//! each error pattern, and derivation of the leading suppression polynomial.
//!
//! Every pattern of injected Z errors up to a weight cutoff is classified as
//! detected (a post-selection fired), undetected-benign (accepted and the
//! outputs still match their references), or undetected-harmful (accepted
//! with a wrong output). Classification runs on the exact state-vector
//! simulator; a Pauli-frame propagation path is available as a fast
//! alternative and the two can be run side by side with a hard agreement
//! check.

mod enumerate;
mod frame;
mod monte_carlo;
mod report;

pub use enumerate::{enumerate_errors, enumerate_errors_with, ClassifierPath, EnumerateOptions};
pub use frame::{classify_by_frame, FrameClassification};
pub use monte_carlo::{monte_carlo_validate, MonteCarloStats};
pub use report::{derive_suppression, InjectionReport, SuppressionModel, WeightClass};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("circuit has no injection sites")]
    NoInjectionSites,

    #[error("circuit declares no reference outputs")]
    NoReference,

    #[error("max weight {max_weight} exceeds the {num_sites} injection sites")]
    MaxWeightTooLarge { max_weight: usize, num_sites: usize },

    #[error("harm tolerance {0} outside (0, 1)")]
    BadHarmTolerance(f64),

    #[error("state-vector and Pauli-frame paths disagree on pattern {pattern:?}")]
    PathDisagreement { pattern: Vec<String> },

    #[error("Pauli-frame path cannot handle this circuit: {0}")]
    FrameUnsupported(String),

    #[error("no undetected-harmful weight class within the scanned weights")]
    NoHarmfulClass,

    #[error(transparent)]
    Sim(#[from] msf_sim_core::SimError),
}
