use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::SimError;
use crate::gate::{Gate, PauliAxis};
use crate::state::QuantumState;

/// XOR of a set of measurement-record bits, optionally negated.
///
/// Conditions gate classical fixups (the op fires when the condition
/// evaluates true) and drive post-selection (the run is rejected when the
/// condition evaluates true).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalCondition {
    pub record_indices: BTreeSet<usize>,
    #[serde(default)]
    pub negate: bool,
}

impl ClassicalCondition {
    pub fn bit(index: usize) -> Self {
        ClassicalCondition {
            record_indices: BTreeSet::from([index]),
            negate: false,
        }
    }

    pub fn parity_of(indices: &[usize]) -> Self {
        ClassicalCondition {
            record_indices: indices.iter().copied().collect(),
            negate: false,
        }
    }

    pub fn negated(mut self) -> Self {
        self.negate = !self.negate;
        self
    }

    pub fn evaluate(&self, record: &[bool]) -> Result<bool, SimError> {
        let mut acc = self.negate;
        for &i in &self.record_indices {
            let bit = record.get(i).ok_or(SimError::RecordIndexOutOfRange {
                index: i,
                recorded: record.len(),
            })?;
            acc ^= bit;
        }
        Ok(acc)
    }

    fn max_index(&self) -> Option<usize> {
        self.record_indices.iter().next_back().copied()
    }
}

impl fmt::Display for ClassicalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negate {
            write!(f, "!")?;
        }
        if self.record_indices.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.record_indices.iter().map(|i| format!("r{i}")).collect();
        write!(f, "{}", parts.join("^"))
    }
}

/// A Pauli-product measurement. The recorded bit is `false` for the +1
/// eigenvalue. `forced` pins the outcome (used for deterministic state
/// preparation); `conditions` make the measurement classically conditional,
/// in which case a skipped measurement records `false` without touching the
/// state, keeping record indices stable across branches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub paulis: Vec<(usize, PauliAxis)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conditions: Vec<ClassicalCondition>,
}

impl Measurement {
    pub fn pauli_product(paulis: Vec<(usize, PauliAxis)>) -> Self {
        Measurement {
            paulis,
            forced: None,
            conditions: Vec::new(),
        }
    }

    /// Z-basis measurement of one qubit.
    pub fn z(qubit: usize) -> Self {
        Measurement::pauli_product(vec![(qubit, PauliAxis::Z)])
    }

    /// X-basis measurement of one qubit.
    pub fn x(qubit: usize) -> Self {
        Measurement::pauli_product(vec![(qubit, PauliAxis::X)])
    }

    pub fn forced(mut self, outcome: bool) -> Self {
        self.forced = Some(outcome);
        self
    }

    pub fn when(mut self, conditions: Vec<ClassicalCondition>) -> Self {
        self.conditions = conditions;
        self
    }
}

/// One circuit operation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Op {
    Gate(Gate),
    Measure(Measurement),
    /// Apply `gates` when every condition evaluates true.
    Controlled {
        conditions: Vec<ClassicalCondition>,
        gates: Vec<Gate>,
    },
    /// Reject the run when the condition evaluates true.
    Postselect { condition: ClassicalCondition },
    /// Labeled Z-error injection point (index into `Circuit::injection_sites`).
    Inject { site: usize },
}

/// A labeled point where a Z error may be injected, placed immediately after
/// the noisy T-type gate it models.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionSite {
    pub label: String,
    pub qubit: usize,
}

/// Ideal single- or few-qubit states the circuit outputs are compared to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ReferenceState {
    /// (|0⟩ + e^{iπ/4}|1⟩)/√2
    T,
    /// CCZ applied to |+++⟩
    Ccz,
    /// Z^θ|+⟩ with θ in degrees
    PhasePlus(f64),
}

impl ReferenceState {
    pub fn num_qubits(&self) -> usize {
        match self {
            ReferenceState::Ccz => 3,
            _ => 1,
        }
    }

    pub fn state(&self) -> QuantumState {
        match self {
            ReferenceState::T => phase_plus(45.0),
            ReferenceState::PhasePlus(deg) => phase_plus(*deg),
            ReferenceState::Ccz => {
                let f = Complex64::new(8f64.sqrt().recip(), 0.0);
                let mut amps = vec![f; 8];
                amps[7] = -f;
                QuantumState::from_amplitudes(amps).expect("normalized")
            }
        }
    }
}

fn phase_plus(degrees: f64) -> QuantumState {
    let f = std::f64::consts::FRAC_1_SQRT_2;
    let amps = vec![
        Complex64::new(f, 0.0),
        Complex64::from_polar(f, degrees.to_radians()),
    ];
    QuantumState::from_amplitudes(amps).expect("normalized")
}

/// Role of a declared output subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputRole {
    Output,
    Catalyst,
}

/// An output subsystem and the ideal state it should hold after an
/// error-free run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub qubits: Vec<usize>,
    pub reference: ReferenceState,
    pub role: OutputRole,
}

impl OutputSpec {
    pub fn output(qubits: Vec<usize>, reference: ReferenceState) -> Self {
        OutputSpec {
            qubits,
            reference,
            role: OutputRole::Output,
        }
    }

    pub fn catalyst(qubits: Vec<usize>, reference: ReferenceState) -> Self {
        OutputSpec {
            qubits,
            reference,
            role: OutputRole::Catalyst,
        }
    }
}

/// An ordered operation list with qubit role labels, labeled injection
/// sites, and declared reference outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub num_qubits: usize,
    #[serde(default)]
    pub qubit_labels: BTreeMap<usize, String>,
    pub ops: Vec<Op>,
    #[serde(default)]
    pub injection_sites: Vec<InjectionSite>,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, num_qubits: usize) -> Self {
        Circuit {
            name: name.into(),
            num_qubits,
            qubit_labels: BTreeMap::new(),
            ops: Vec::new(),
            injection_sites: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn label(&mut self, qubit: usize, label: impl Into<String>) {
        self.qubit_labels.insert(qubit, label.into());
    }

    pub fn push_gate(&mut self, gate: Gate) {
        self.ops.push(Op::Gate(gate));
    }

    pub fn push_measure(&mut self, m: Measurement) {
        self.ops.push(Op::Measure(m));
    }

    pub fn push_controlled(&mut self, conditions: Vec<ClassicalCondition>, gates: Vec<Gate>) {
        self.ops.push(Op::Controlled { conditions, gates });
    }

    pub fn push_postselect(&mut self, condition: ClassicalCondition) {
        self.ops.push(Op::Postselect { condition });
    }

    /// Register an injection site after the current op position.
    pub fn push_injection_site(&mut self, label: impl Into<String>, qubit: usize) {
        let site = self.injection_sites.len();
        self.injection_sites.push(InjectionSite {
            label: label.into(),
            qubit,
        });
        self.ops.push(Op::Inject { site });
    }

    pub fn site_labels(&self) -> Vec<&str> {
        self.injection_sites.iter().map(|s| s.label.as_str()).collect()
    }

    /// Number of measurements in the op list (the final record length).
    pub fn num_measurements(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::Measure(_)))
            .count()
    }

    /// Structural validation: index ranges, condition ordering, site wiring.
    pub fn validate(&self) -> Result<(), SimError> {
        let n = self.num_qubits;
        let check_qubit = |q: usize| -> Result<(), SimError> {
            if q >= n {
                Err(SimError::QubitOutOfRange {
                    index: q,
                    num_qubits: n,
                })
            } else {
                Ok(())
            }
        };
        for &q in self.qubit_labels.keys() {
            check_qubit(q)?;
        }
        let check_conditions =
            |conds: &[ClassicalCondition], measured: usize| -> Result<(), SimError> {
                for cond in conds {
                    if let Some(max) = cond.max_index() {
                        if max >= measured {
                            return Err(SimError::InvalidCircuit(format!(
                                "condition references record index {max} before it is measured"
                            )));
                        }
                    }
                }
                Ok(())
            };
        let mut measured = 0usize;
        let mut sites_seen = vec![false; self.injection_sites.len()];
        for op in &self.ops {
            match op {
                Op::Gate(g) => g.validate(n)?,
                Op::Measure(m) => {
                    if m.paulis.is_empty() {
                        return Err(SimError::EmptyPauliProduct);
                    }
                    for &(q, _) in &m.paulis {
                        check_qubit(q)?;
                    }
                    check_conditions(&m.conditions, measured)?;
                    measured += 1;
                }
                Op::Controlled { conditions, gates } => {
                    check_conditions(conditions, measured)?;
                    for g in gates {
                        g.validate(n)?;
                    }
                }
                Op::Postselect { condition } => {
                    check_conditions(std::slice::from_ref(condition), measured)?;
                }
                Op::Inject { site } => {
                    let info = self.injection_sites.get(*site).ok_or_else(|| {
                        SimError::InvalidCircuit(format!("injection op references site {site}"))
                    })?;
                    check_qubit(info.qubit)?;
                    if sites_seen[*site] {
                        return Err(SimError::InvalidCircuit(format!(
                            "injection site {} appears twice",
                            info.label
                        )));
                    }
                    sites_seen[*site] = true;
                }
            }
        }
        if let Some(missing) = sites_seen.iter().position(|seen| !seen) {
            return Err(SimError::InvalidCircuit(format!(
                "injection site {} has no op",
                self.injection_sites[missing].label
            )));
        }
        for spec in &self.outputs {
            for &q in &spec.qubits {
                check_qubit(q)?;
            }
            if spec.reference.num_qubits() != spec.qubits.len() {
                return Err(SimError::InvalidCircuit(format!(
                    "output over {} qubit(s) has a {}-qubit reference",
                    spec.qubits.len(),
                    spec.reference.num_qubits()
                )));
            }
        }
        Ok(())
    }
}

/// Plain-text rendering, one op per line. Stable; used for golden tests and
/// CLI inspection. JSON (serde) is the machine round-trip format.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit {}", self.name)?;
        writeln!(f, "qubits {}", self.num_qubits)?;
        for (q, label) in &self.qubit_labels {
            writeln!(f, "label {q} {label}")?;
        }
        for site in &self.injection_sites {
            writeln!(f, "site {} {}", site.label, site.qubit)?;
        }
        for op in &self.ops {
            match op {
                Op::Gate(g) => writeln!(f, "{}", gate_line(g))?,
                Op::Measure(m) => {
                    let product: Vec<String> = m
                        .paulis
                        .iter()
                        .map(|(q, axis)| format!("{axis}{q}"))
                        .collect();
                    let mut line = format!("measure {}", product.join("*"));
                    if let Some(bit) = m.forced {
                        line.push_str(&format!(" forced={}", u8::from(bit)));
                    }
                    if !m.conditions.is_empty() {
                        line.push_str(&format!(" if {}", join_conditions(&m.conditions)));
                    }
                    writeln!(f, "{line}")?;
                }
                Op::Controlled { conditions, gates } => {
                    let body: Vec<String> = gates.iter().map(gate_line).collect();
                    writeln!(
                        f,
                        "when {} do {}",
                        join_conditions(conditions),
                        body.join("; ")
                    )?;
                }
                Op::Postselect { condition } => writeln!(f, "postselect reject_if {condition}")?,
                Op::Inject { site } => {
                    writeln!(f, "inject {}", self.injection_sites[*site].label)?
                }
            }
        }
        Ok(())
    }
}

fn join_conditions(conds: &[ClassicalCondition]) -> String {
    let parts: Vec<String> = conds.iter().map(|c| format!("({c})")).collect();
    parts.join("&")
}

fn gate_line(g: &Gate) -> String {
    let targets: Vec<String> = g.targets.iter().map(|q| q.to_string()).collect();
    let mut line = format!("{} {}", g.kind.name(), targets.join(" "));
    if !g.controls.is_empty() {
        let ctrls: Vec<String> = g
            .controls
            .iter()
            .map(|ctl| {
                let axis = match ctl.axis {
                    crate::gate::Axis::Z => "z",
                    crate::gate::Axis::X => "x",
                };
                format!("{}{}:{}", axis, ctl.qubit, u8::from(ctl.on))
            })
            .collect();
        line.push_str(&format!(" ctrl {}", ctrls.join(" ")));
    }
    line
}
