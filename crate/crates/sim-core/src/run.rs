use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

use crate::circuit::{Circuit, Op};
use crate::error::SimError;
use crate::gate::Gate;
use crate::state::QuantumState;

/// Options for a single circuit execution.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Injection-site labels that receive a Z error.
    pub injected: BTreeSet<String>,
    /// Per-measurement outcome overrides keyed by record index. An override
    /// wins over both sampling and a circuit-declared forced outcome; it
    /// fails if the requested branch has zero probability.
    pub overrides: BTreeMap<usize, bool>,
}

impl RunOptions {
    pub fn seeded(seed: u64) -> Self {
        RunOptions {
            seed,
            ..Default::default()
        }
    }

    pub fn with_injected(mut self, labels: &[&str]) -> Self {
        self.injected = labels.iter().map(|s| s.to_string()).collect();
        self
    }
}

/// Result of executing a circuit: the final state (which carries the
/// measurement record) and whether every post-selection passed.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub state: QuantumState,
    pub accepted: bool,
}

impl RunOutcome {
    pub fn record(&self) -> &[bool] {
        self.state.record()
    }

    /// Fidelity of each declared output subsystem against its reference.
    pub fn output_fidelities(&self, circuit: &Circuit) -> Result<Vec<f64>, SimError> {
        circuit
            .outputs
            .iter()
            .map(|spec| {
                self.state
                    .subsystem_fidelity(&spec.qubits, &spec.reference.state())
            })
            .collect()
    }
}

/// Execute a circuit from |0…0⟩ with the given seed and injected Z errors.
pub fn run_circuit(
    circuit: &Circuit,
    seed: u64,
    injected: &BTreeSet<String>,
) -> Result<RunOutcome, SimError> {
    run_circuit_with(
        circuit,
        &RunOptions {
            seed,
            injected: injected.clone(),
            overrides: BTreeMap::new(),
        },
    )
}

/// Execute a circuit from |0…0⟩ with full options.
pub fn run_circuit_with(circuit: &Circuit, options: &RunOptions) -> Result<RunOutcome, SimError> {
    run_circuit_from(QuantumState::zero(circuit.num_qubits), circuit, options)
}

/// Execute a circuit from a caller-supplied initial state. The state must
/// have the circuit's qubit count; its existing record must be empty.
pub fn run_circuit_from(
    initial: QuantumState,
    circuit: &Circuit,
    options: &RunOptions,
) -> Result<RunOutcome, SimError> {
    circuit.validate()?;
    let injected = resolve_sites(circuit, &options.injected)?;
    if initial.num_qubits() != circuit.num_qubits {
        return Err(SimError::DimensionMismatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut state = initial;
    let mut accepted = true;
    let mut measured = 0usize;
    for op in &circuit.ops {
        match op {
            Op::Gate(g) => state.apply_gate(g)?,
            Op::Measure(m) => {
                if !all_hold(&m.conditions, state.record())? {
                    state.push_record(false);
                } else {
                    let forced = options.overrides.get(&measured).copied().or(m.forced);
                    state.measure_pauli_product(&m.paulis, forced, &mut rng)?;
                }
                measured += 1;
            }
            Op::Controlled { conditions, gates } => {
                if all_hold(conditions, state.record())? {
                    for g in gates {
                        state.apply_gate(g)?;
                    }
                }
            }
            Op::Postselect { condition } => {
                if condition.evaluate(state.record())? {
                    accepted = false;
                }
            }
            Op::Inject { site } => {
                if injected.contains(site) {
                    state.apply_gate(&Gate::z(circuit.injection_sites[*site].qubit))?;
                }
            }
        }
    }
    Ok(RunOutcome { state, accepted })
}

/// Result of applying a post-selection condition: distinct from an error,
/// a rejection just means the run must be discarded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Postselection {
    Pass,
    Reject,
}

/// Apply a post-selection condition to a state's measurement record. The
/// run is rejected when the condition evaluates true.
pub fn postselect(
    state: &QuantumState,
    condition: &crate::circuit::ClassicalCondition,
) -> Result<Postselection, SimError> {
    Ok(if condition.evaluate(state.record())? {
        Postselection::Reject
    } else {
        Postselection::Pass
    })
}

/// One leaf of an exhaustive walk over measurement outcomes.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcome: RunOutcome,
    pub probability: f64,
}

/// Enumerate every reachable measurement branch of a circuit, respecting
/// circuit-forced outcomes (those do not fork). Branch probabilities sum to
/// one. Fails if more than `limit` leaves would be produced.
pub fn enumerate_branches(
    circuit: &Circuit,
    injected: &BTreeSet<String>,
    limit: usize,
) -> Result<Vec<Branch>, SimError> {
    circuit.validate()?;
    let injected = resolve_sites(circuit, injected)?;
    let mut leaves = Vec::new();
    let initial = QuantumState::zero(circuit.num_qubits);
    walk(circuit, &injected, initial, 0, true, 1.0, limit, &mut leaves)?;
    Ok(leaves)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    circuit: &Circuit,
    injected: &BTreeSet<usize>,
    mut state: QuantumState,
    start: usize,
    mut accepted: bool,
    mut prob: f64,
    limit: usize,
    leaves: &mut Vec<Branch>,
) -> Result<(), SimError> {
    const BRANCH_FLOOR: f64 = 1e-12;
    for (idx, op) in circuit.ops.iter().enumerate().skip(start) {
        match op {
            Op::Gate(g) => state.apply_gate(g)?,
            Op::Measure(m) => {
                if !all_hold(&m.conditions, state.record())? {
                    state.push_record(false);
                } else if let Some(bit) = m.forced {
                    state.project_pauli_product(&m.paulis, bit)?;
                } else {
                    let e = state.pauli_product_expectation(&m.paulis)?;
                    let p_plus = ((1.0 + e) / 2.0).clamp(0.0, 1.0);
                    let p_minus = 1.0 - p_plus;
                    if p_plus >= BRANCH_FLOOR && p_minus >= BRANCH_FLOOR {
                        let mut fork = state.clone();
                        fork.project_pauli_product(&m.paulis, true)?;
                        walk(
                            circuit,
                            injected,
                            fork,
                            idx + 1,
                            accepted,
                            prob * p_minus,
                            limit,
                            leaves,
                        )?;
                        state.project_pauli_product(&m.paulis, false)?;
                        prob *= p_plus;
                    } else {
                        let bit = p_minus > p_plus;
                        state.project_pauli_product(&m.paulis, bit)?;
                    }
                }
            }
            Op::Controlled { conditions, gates } => {
                if all_hold(conditions, state.record())? {
                    for g in gates {
                        state.apply_gate(g)?;
                    }
                }
            }
            Op::Postselect { condition } => {
                if condition.evaluate(state.record())? {
                    accepted = false;
                }
            }
            Op::Inject { site } => {
                if injected.contains(site) {
                    state.apply_gate(&Gate::z(circuit.injection_sites[*site].qubit))?;
                }
            }
        }
    }
    if leaves.len() >= limit {
        return Err(SimError::BranchLimit { limit });
    }
    leaves.push(Branch {
        outcome: RunOutcome { state, accepted },
        probability: prob,
    });
    Ok(())
}

fn all_hold(
    conditions: &[crate::circuit::ClassicalCondition],
    record: &[bool],
) -> Result<bool, SimError> {
    for cond in conditions {
        if !cond.evaluate(record)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn resolve_sites(
    circuit: &Circuit,
    labels: &BTreeSet<String>,
) -> Result<BTreeSet<usize>, SimError> {
    let mut ids = BTreeSet::new();
    for label in labels {
        let id = circuit
            .injection_sites
            .iter()
            .position(|s| &s.label == label)
            .ok_or_else(|| SimError::UnknownInjectionSite {
                label: label.clone(),
            })?;
        ids.insert(id);
    }
    Ok(ids)
}
