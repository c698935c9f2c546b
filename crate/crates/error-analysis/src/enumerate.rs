use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

use msf_sim_core::{run_circuit, Circuit};

use crate::frame::classify_by_frame;
use crate::report::{InjectionReport, WeightClass};
use crate::AnalysisError;

/// Which classifier backs the enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassifierPath {
    /// Exact state-vector re-simulation per pattern (the reference).
    StateVector,
    /// Pauli-frame propagation (fast, Clifford-skeleton circuits only).
    PauliFrame,
    /// Run both and fail loudly on any disagreement.
    Both,
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub max_weight: usize,
    pub harm_tolerance: f64,
    pub path: ClassifierPath,
}

impl EnumerateOptions {
    pub fn new(max_weight: usize) -> Self {
        EnumerateOptions {
            max_weight,
            harm_tolerance: 1e-6,
            path: ClassifierPath::StateVector,
        }
    }

    pub fn path(mut self, path: ClassifierPath) -> Self {
        self.path = path;
        self
    }
}

/// Exhaustively classify every Z-error pattern of weight up to `max_weight`
/// over the circuit's injection sites, using the state-vector classifier.
pub fn enumerate_errors(
    circuit: &Circuit,
    max_weight: usize,
    harm_tolerance: f64,
) -> Result<InjectionReport, AnalysisError> {
    enumerate_errors_with(
        circuit,
        EnumerateOptions {
            max_weight,
            harm_tolerance,
            path: ClassifierPath::StateVector,
        },
    )
}

pub fn enumerate_errors_with(
    circuit: &Circuit,
    options: EnumerateOptions,
) -> Result<InjectionReport, AnalysisError> {
    let num_sites = circuit.injection_sites.len();
    if num_sites == 0 {
        return Err(AnalysisError::NoInjectionSites);
    }
    if circuit.outputs.is_empty() {
        return Err(AnalysisError::NoReference);
    }
    if options.max_weight > num_sites {
        return Err(AnalysisError::MaxWeightTooLarge {
            max_weight: options.max_weight,
            num_sites,
        });
    }
    if !(options.harm_tolerance > 0.0 && options.harm_tolerance < 1.0) {
        return Err(AnalysisError::BadHarmTolerance(options.harm_tolerance));
    }
    circuit.validate().map_err(AnalysisError::Sim)?;

    let labels: Vec<String> = circuit
        .injection_sites
        .iter()
        .map(|s| s.label.clone())
        .collect();
    let mut patterns: Vec<Vec<usize>> = Vec::new();
    for w in 0..=options.max_weight {
        combinations(num_sites, w, &mut patterns);
    }

    let classified: Result<Vec<(usize, Class)>, AnalysisError> = patterns
        .par_iter()
        .map(|pattern| {
            let injected: BTreeSet<String> =
                pattern.iter().map(|&i| labels[i].clone()).collect();
            let class = classify(circuit, &injected, options)?;
            Ok((pattern.len(), class))
        })
        .collect();

    let mut per_weight: BTreeMap<usize, WeightClass> = BTreeMap::new();
    for (weight, class) in classified? {
        let entry = per_weight.entry(weight).or_default();
        match class {
            Class::Detected => entry.detected += 1,
            Class::Benign => entry.undetected_benign += 1,
            Class::Harmful => entry.undetected_harmful += 1,
        }
    }
    Ok(InjectionReport::from_counts(
        circuit.name.clone(),
        num_sites,
        options.harm_tolerance,
        per_weight,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Class {
    Detected,
    Benign,
    Harmful,
}

pub(crate) fn classify(
    circuit: &Circuit,
    injected: &BTreeSet<String>,
    options: EnumerateOptions,
) -> Result<Class, AnalysisError> {
    match options.path {
        ClassifierPath::StateVector => classify_by_state(circuit, injected, options),
        ClassifierPath::PauliFrame => classify_by_frame(circuit, injected).map(to_class),
        ClassifierPath::Both => {
            let sv = classify_by_state(circuit, injected, options)?;
            let frame = classify_by_frame(circuit, injected).map(to_class)?;
            if sv != frame {
                return Err(AnalysisError::PathDisagreement {
                    pattern: injected.iter().cloned().collect(),
                });
            }
            Ok(sv)
        }
    }
}

fn to_class(frame: crate::frame::FrameClassification) -> Class {
    if !frame.accepted {
        Class::Detected
    } else if frame.harmful {
        Class::Harmful
    } else {
        Class::Benign
    }
}

fn classify_by_state(
    circuit: &Circuit,
    injected: &BTreeSet<String>,
    options: EnumerateOptions,
) -> Result<Class, AnalysisError> {
    let outcome = run_circuit(circuit, 0, injected)?;
    if !outcome.accepted {
        return Ok(Class::Detected);
    }
    for fid in outcome.output_fidelities(circuit)? {
        if fid < 1.0 - options.harm_tolerance {
            return Ok(Class::Harmful);
        }
    }
    Ok(Class::Benign)
}

/// Append all `weight`-element subsets of `0..n` to `out`.
fn combinations(n: usize, weight: usize, out: &mut Vec<Vec<usize>>) {
    let mut current = Vec::with_capacity(weight);
    fn rec(start: usize, n: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..=(n - left) {
            current.push(i);
            rec(i + 1, n, left - 1, current, out);
            current.pop();
        }
    }
    rec(0, n, weight, &mut current, out);
}
