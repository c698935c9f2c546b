//! Catalyzed phase-gate circuits: the CCZ→3T transformation in inline and
//! lattice-surgery form, and the generalized two-target phase catalysis.
//!
//! # Classical wiring of the surgery-form C2T circuit
//!
//! The measurement-based form interleaves parity measurements with classical
//! processing. The table below is the reconstruction used here, with record
//! indices as produced by [`build_c2t_surgery`] (bit `false` = +1 outcome):
//!
//! | bit | measurement                              |
//! |-----|------------------------------------------|
//! | r0  | X₃X_B product                            |
//! | r1  | X₁X₂X_A product                          |
//! | r2  | Z₁Z₂Z₃Z_T product (T teleportation)      |
//! | r3  | catalyst qubit T, X basis                |
//! | r4  | ancilla B, Z basis                       |
//! | r5  | Z₃Z_A product                            |
//! | r6  | ancilla A, X basis                       |
//! | r7  | Z₁Z₂Z₃Z_S product, armed when r0⊕r2⊕r4=1 |
//! | r8  | ancilla S, X basis                       |
//!
//! Fixups applied to the outputs (1, 2, 3 = qubits 0, 1, 2):
//!
//! | condition               | fixup      |
//! |-------------------------|------------|
//! | (r0⊕r2⊕r4) ∧ r7         | Z₁Z₂Z₃     |
//! | (r0⊕r4) ∧ (r0⊕r2⊕r4)    | Z₁Z₂Z₃     |
//! | r8 ∧ (r0⊕r2⊕r4)         | Z₁Z₂Z₃     |
//! | r1                      | Z₃         |
//! | r6                      | Z₃         |
//! | r3                      | Z₁Z₂Z₃     |
//! | r5                      | X₁X₂       |
//! | r0⊕r4                   | X₁X₂X₃     |
//! | always                  | X₃         |

use msf_sim_core::{
    Circuit, ClassicalCondition, Control, Gate, Measurement, OutputSpec, ReferenceState,
};

use crate::BuildError;

/// √T corresponds to a 22.5° phase.
pub const SQRT_T_DEGREES: f64 = 22.5;

/// Input preparation prepended by the C2T builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum C2tInput {
    /// Prepare an ideal |CCZ⟩ on the data qubits (and an ideal catalyst |T⟩
    /// in the surgery form).
    IdealCcz,
    /// Prepare |+++⟩ without the CCZ gate; a deliberately mismatched input.
    PlusPlusPlus,
    /// No preparation ops; the caller supplies the initial state.
    None,
}

/// Inline circuit transforming |CCZ⟩ into three |T⟩ states with Clifford
/// gates and a single T-type gate (injection site "t").
///
/// Qubits 0..=2 carry the CCZ trio; all three end as |T⟩ outputs. Feeding
/// one output back as the next round's internal T gate turns the circuit
/// into the catalyzed CCZ → 2T factory.
pub fn build_c2t_simple() -> Circuit {
    build_c2t_simple_with(C2tInput::IdealCcz)
}

pub fn build_c2t_simple_with(input: C2tInput) -> Circuit {
    let mut c = Circuit::new("c2t-simple", 3);
    for (q, label) in [(0, "1"), (1, "2"), (2, "3")] {
        c.label(q, label);
    }
    push_ccz_prep(&mut c, input, [0, 1, 2]);

    c.push_gate(Gate::x_neg_half(2));
    c.push_gate(Gate::multi_cnot(vec![0, 1], vec![Control::z_anti(2)]));
    push_xx_controlled_zz(&mut c, 2, [0, 1]);
    c.push_gate(Gate::t_dag(2));
    c.push_injection_site("t", 2);
    push_xx_controlled_zz(&mut c, 2, [0, 1]);

    for q in 0..3 {
        c.outputs
            .push(OutputSpec::output(vec![q], ReferenceState::T));
    }
    c
}

/// Z⊗Z on `targets`, fired by an X-axis control: the inline stand-in for a
/// lattice-surgery parity operation.
fn push_xx_controlled_zz(c: &mut Circuit, control: usize, targets: [usize; 2]) {
    for t in targets {
        c.push_gate(Gate::z(t).with_controls(vec![Control::x(control)]));
    }
}

/// Measurement-based C2T circuit specialized for lattice surgery.
///
/// Qubits: 0..=2 data ("1".."3"), 3 catalyst ("T"), 4 ("S", corrects the T
/// teleportation), 5 ("B", performs the X^∓½), 6 ("A", performs the
/// multi-target CNOT). On an ideal |CCZ⟩ + |T⟩ input every measurement
/// branch leaves qubits 0..=2 in |T⟩.
pub fn build_c2t_surgery() -> Circuit {
    build_c2t_surgery_with(C2tInput::IdealCcz)
}

pub fn build_c2t_surgery_with(input: C2tInput) -> Circuit {
    let mut c = Circuit::new("c2t-surgery", 7);
    for (q, label) in [(0, "1"), (1, "2"), (2, "3"), (3, "T"), (4, "S"), (5, "B"), (6, "A")] {
        c.label(q, label);
    }
    match input {
        C2tInput::IdealCcz => {
            for q in 0..4 {
                c.push_gate(Gate::h(q));
            }
            c.push_gate(Gate::t(3));
            c.push_injection_site("t", 3);
            c.push_gate(Gate::ccz(0, 1, 2));
        }
        C2tInput::PlusPlusPlus => {
            for q in 0..4 {
                c.push_gate(Gate::h(q));
            }
            c.push_gate(Gate::t(3));
            c.push_injection_site("t", 3);
        }
        C2tInput::None => {}
    }

    use msf_sim_core::PauliAxis::{X, Z};
    // r0, r1: X-parity hookups of B and A.
    c.push_measure(Measurement::pauli_product(vec![(2, X), (5, X)]));
    c.push_measure(Measurement::pauli_product(vec![(0, X), (1, X), (6, X)]));
    c.push_gate(Gate::x_half(5));
    // r2: the T-gate teleportation parity, before the catalyst leaves.
    c.push_measure(Measurement::pauli_product(vec![
        (0, Z),
        (1, Z),
        (2, Z),
        (3, Z),
    ]));
    c.push_gate(Gate::h(3));
    c.push_measure(Measurement::z(3)); // r3
    c.push_measure(Measurement::z(5)); // r4
    c.push_gate(Gate::x_neg_half(4));
    c.push_measure(Measurement::pauli_product(vec![(2, Z), (6, Z)])); // r5
    c.push_gate(Gate::h(6));
    c.push_measure(Measurement::z(6)); // r6

    let t_parity = ClassicalCondition::parity_of(&[0, 2, 4]);
    // r7: the conditional S-correction parity; records 0 when not armed.
    c.push_measure(
        Measurement::pauli_product(vec![(0, Z), (1, Z), (2, Z), (4, Z)])
            .when(vec![t_parity.clone()]),
    );
    c.push_gate(Gate::h(4));
    c.push_measure(Measurement::z(4)); // r8

    let zzz = || vec![Gate::z(0), Gate::z(1), Gate::z(2)];
    c.push_controlled(vec![t_parity.clone(), ClassicalCondition::bit(7)], zzz());
    c.push_controlled(
        vec![ClassicalCondition::parity_of(&[0, 4]), t_parity.clone()],
        zzz(),
    );
    c.push_controlled(vec![ClassicalCondition::bit(8), t_parity], zzz());
    c.push_controlled(vec![ClassicalCondition::bit(1)], vec![Gate::z(2)]);
    c.push_controlled(vec![ClassicalCondition::bit(6)], vec![Gate::z(2)]);
    c.push_controlled(vec![ClassicalCondition::bit(3)], zzz());
    c.push_controlled(
        vec![ClassicalCondition::bit(5)],
        vec![Gate::x(0), Gate::x(1)],
    );
    c.push_controlled(
        vec![ClassicalCondition::parity_of(&[0, 4])],
        vec![Gate::x(0), Gate::x(1), Gate::x(2)],
    );
    c.push_gate(Gate::x(2));

    for q in 0..3 {
        c.outputs
            .push(OutputSpec::output(vec![q], ReferenceState::T));
    }
    c
}

fn push_ccz_prep(c: &mut Circuit, input: C2tInput, qubits: [usize; 3]) {
    match input {
        C2tInput::IdealCcz => {
            for q in qubits {
                c.push_gate(Gate::h(q));
            }
            c.push_gate(Gate::ccz(qubits[0], qubits[1], qubits[2]));
        }
        C2tInput::PlusPlusPlus => {
            for q in qubits {
                c.push_gate(Gate::h(q));
            }
        }
        C2tInput::None => {}
    }
}

/// Input preparation for the generalized phase catalysis circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseCatalysisPrep {
    /// |+⟩ data qubits and a fresh Z^θ|+⟩ catalyst.
    Standard,
    /// No preparation; the caller supplies data, catalyst, and a |0⟩ ancilla.
    None,
}

/// Generalized phase catalysis: applies Z^θ to both data qubits using one
/// AND computation, one Z^{2θ} gate, CNOTs, and a Z^θ|+⟩ catalyst that is
/// returned intact on every measurement branch.
///
/// Qubits: 0, 1 data ("p", "q"), 2 catalyst, 3 AND ancilla. θ is in degrees
/// and must lie in (0°, 90°]. At θ = 22.5° the Z^{2θ} gate is a T gate and
/// the circuit emits two √T states per run.
pub fn build_phase_catalysis(theta_degrees: f64) -> Result<Circuit, BuildError> {
    build_phase_catalysis_with(theta_degrees, PhaseCatalysisPrep::Standard)
}

pub fn build_phase_catalysis_with(
    theta_degrees: f64,
    prep: PhaseCatalysisPrep,
) -> Result<Circuit, BuildError> {
    if !(theta_degrees > 0.0 && theta_degrees <= 90.0) {
        return Err(BuildError::ThetaOutOfRange {
            theta: theta_degrees,
        });
    }
    let mut c = Circuit::new(format!("phase-catalysis({theta_degrees})"), 4);
    for (q, label) in [(0, "p"), (1, "q"), (2, "catalyst"), (3, "and")] {
        c.label(q, label);
    }
    if prep == PhaseCatalysisPrep::Standard {
        for q in 0..3 {
            c.push_gate(Gate::h(q));
        }
        c.push_gate(Gate::phase(2, theta_degrees));
    }

    // Accumulate a ⊕ b into the catalyst; the carry into the 2θ place is
    // collected on the ancilla so a single Z^{2θ} supplies both the AND
    // phase and the catalyst restoration.
    c.push_gate(Gate::cnot(0, 1));
    c.push_gate(Gate::cnot(1, 2));
    c.push_gate(Gate::cnot(2, 0));
    c.push_gate(Gate::multi_cnot(
        vec![3],
        vec![Control::z(0), Control::z(1)],
    ));
    c.push_gate(Gate::cnot(2, 0));
    c.push_gate(Gate::cnot(0, 3));
    c.push_gate(Gate::phase(3, 2.0 * theta_degrees));
    c.push_injection_site("t", 3);
    c.push_gate(Gate::cnot(0, 3));
    c.push_gate(Gate::cnot(2, 0));
    // Measurement-based AND uncomputation.
    c.push_measure(Measurement::x(3));
    c.push_controlled(vec![ClassicalCondition::bit(0)], vec![Gate::cz(0, 1)]);
    c.push_gate(Gate::cnot(2, 0));
    c.push_gate(Gate::cnot(0, 1));

    c.outputs.push(OutputSpec::output(
        vec![0],
        ReferenceState::PhasePlus(theta_degrees),
    ));
    c.outputs.push(OutputSpec::output(
        vec![1],
        ReferenceState::PhasePlus(theta_degrees),
    ));
    c.outputs.push(OutputSpec::catalyst(
        vec![2],
        ReferenceState::PhasePlus(theta_degrees),
    ));
    Ok(c)
}

/// T-equivalent cost of one phase catalysis run (two output states): 4 for
/// the AND computation plus the cost of the Z^{2θ} gate. Returns `None`
/// when Z^{2θ} is not a Clifford or T-level gate and would need synthesis.
pub fn phase_catalysis_t_cost(theta_degrees: f64) -> Option<f64> {
    const AND_T_COST: f64 = 4.0;
    let two_theta = (2.0 * theta_degrees).rem_euclid(360.0);
    let eps = 1e-9;
    let is_multiple_of = |unit: f64| (two_theta / unit - (two_theta / unit).round()).abs() < eps;
    if is_multiple_of(90.0) {
        Some(AND_T_COST) // Z^{2θ} is Clifford
    } else if is_multiple_of(45.0) {
        Some(AND_T_COST + 1.0) // Z^{2θ} is a T-level gate
    } else {
        None
    }
}
