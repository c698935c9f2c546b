use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::AnalysisError;

/// Classification counts for one error weight.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightClass {
    pub detected: u64,
    pub undetected_benign: u64,
    pub undetected_harmful: u64,
}

impl WeightClass {
    pub fn total(&self) -> u64 {
        self.detected + self.undetected_benign + self.undetected_harmful
    }
}

/// Per-weight classification of all injected Z-error patterns up to a weight
/// cutoff, plus the derived leading suppression term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjectionReport {
    pub circuit: String,
    pub num_sites: usize,
    pub harm_tolerance: f64,
    pub per_weight: BTreeMap<usize, WeightClass>,
    /// (coefficient, degree) of the lowest weight with a harmful pattern.
    pub leading_term: Option<(u64, u32)>,
}

impl InjectionReport {
    pub(crate) fn from_counts(
        circuit: String,
        num_sites: usize,
        harm_tolerance: f64,
        per_weight: BTreeMap<usize, WeightClass>,
    ) -> Self {
        let leading_term = per_weight
            .iter()
            .find(|(_, class)| class.undetected_harmful > 0)
            .map(|(w, class)| (class.undetected_harmful, *w as u32));
        InjectionReport {
            circuit,
            num_sites,
            harm_tolerance,
            per_weight,
            leading_term,
        }
    }

    /// Probability that a run with independent per-site error rate ε is
    /// rejected, summed over the scanned weights. Heavier unscanned patterns
    /// contribute O(ε^{w_max+1}).
    pub fn predicted_rejection_rate(&self, eps: f64) -> f64 {
        self.weighted_sum(eps, |c| c.detected)
    }

    /// Probability that a run is accepted with a harmful output, summed over
    /// the scanned weights.
    pub fn predicted_harmful_rate(&self, eps: f64) -> f64 {
        self.weighted_sum(eps, |c| c.undetected_harmful)
    }

    fn weighted_sum(&self, eps: f64, pick: impl Fn(&WeightClass) -> u64) -> f64 {
        self.per_weight
            .iter()
            .map(|(w, class)| {
                pick(class) as f64
                    * eps.powi(*w as i32)
                    * (1.0 - eps).powi((self.num_sites - w) as i32)
            })
            .sum()
    }
}

impl fmt::Display for InjectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} injection sites, harm tolerance {:.1e}",
            self.circuit, self.num_sites, self.harm_tolerance
        )?;
        writeln!(f, "{:>6} {:>10} {:>10} {:>10}", "weight", "detected", "benign", "harmful")?;
        for (w, class) in &self.per_weight {
            writeln!(
                f,
                "{:>6} {:>10} {:>10} {:>10}",
                w, class.detected, class.undetected_benign, class.undetected_harmful
            )?;
        }
        match self.leading_term {
            Some((coeff, degree)) => writeln!(f, "leading suppression term: {coeff} eps^{degree}"),
            None => writeln!(f, "no harmful patterns within the scanned weights"),
        }
    }
}

/// Leading-order map from input error rate to output error rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuppressionModel {
    pub coefficient: u64,
    pub degree: u32,
}

impl SuppressionModel {
    pub const fn new(coefficient: u64, degree: u32) -> Self {
        SuppressionModel {
            coefficient,
            degree,
        }
    }

    pub fn evaluate(&self, eps: f64) -> f64 {
        self.coefficient as f64 * eps.powi(self.degree as i32)
    }
}

impl fmt::Display for SuppressionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} eps^{}", self.coefficient, self.degree)
    }
}

/// Extract the leading suppression term from an enumeration report.
pub fn derive_suppression(report: &InjectionReport) -> Result<SuppressionModel, AnalysisError> {
    report
        .leading_term
        .map(|(coefficient, degree)| SuppressionModel {
            coefficient,
            degree,
        })
        .ok_or(AnalysisError::NoHarmfulClass)
}
