use msf_sim_core::{
    Circuit, ClassicalCondition, Control, Gate, Measurement, OutputSpec, ReferenceState,
};

/// The 8T→CCZ factory circuit.
///
/// Layout (15 qubits):
/// - qubits 0..=2: output qubits "1".."3",
/// - qubits 3..=10: ancilla qubits "a".."h", each consuming one noisy T state
///   (injection sites "a".."h"),
/// - qubits 11..=14: stabilizer qubits, labeled by the X-stabilizer product
///   they record.
///
/// Four multi-target CNOTs with an X-axis control on a fresh stabilizer
/// qubit, each followed by a Z measurement of that qubit, realize the four
/// X-stabilizer product measurements. After the T gates the ancillae are
/// measured in the X basis; the parity of those eight bits together with the
/// all-ancilla stabilizer bit must come out even, and a hit means a detected
/// error. The remaining bits drive Pauli fixups on the outputs.
pub fn build_ccz_factory() -> Circuit {
    let mut c = Circuit::new("ccz8", 15);
    for (q, label) in [(0, "1"), (1, "2"), (2, "3")] {
        c.label(q, label);
    }
    let ancilla_labels = ["a", "b", "c", "d", "e", "f", "g", "h"];
    for (i, label) in ancilla_labels.iter().enumerate() {
        c.label(3 + i, *label);
    }
    c.label(11, "X1abcd");
    c.label(12, "Xabcdefgh");
    c.label(13, "X3aceg");
    c.label(14, "X2abef");

    // X-stabilizer product measurements via stabilizer qubits 11..=14.
    let stabilizers: [(usize, &[usize]); 4] = [
        (11, &[0, 3, 4, 5, 6]),
        (12, &[3, 4, 5, 6, 7, 8, 9, 10]),
        (13, &[2, 3, 5, 7, 9]),
        (14, &[1, 3, 4, 7, 8]),
    ];
    for (sq, targets) in stabilizers {
        c.push_gate(Gate::multi_cnot(targets.to_vec(), vec![Control::x(sq)]));
    }
    for sq in 11..=14 {
        // Record bits r0..r3.
        c.push_measure(Measurement::z(sq));
    }

    // Noisy T inputs: one T gate and one injection site per ancilla.
    for (i, label) in ancilla_labels.iter().enumerate() {
        let q = 3 + i;
        c.push_gate(Gate::t(q));
        c.push_injection_site(*label, q);
    }

    // X-basis readout of the ancillae: r4..r11.
    for q in 3..=10 {
        c.push_gate(Gate::h(q));
    }
    for q in 3..=10 {
        c.push_measure(Measurement::z(q));
    }

    // Pauli fixups keyed by the ancilla readout bits.
    let ancilla_fixups: [(usize, &[usize]); 7] = [
        (4, &[0, 1, 2]),
        (5, &[0, 1]),
        (6, &[0, 2]),
        (7, &[0]),
        (8, &[1, 2]),
        (9, &[1]),
        (10, &[2]),
        // bit r11 (ancilla h) has no Pauli fixup; it only enters the parity.
    ];
    for (bit, zs) in ancilla_fixups {
        let gates = zs.iter().map(|&q| Gate::z(q)).collect();
        c.push_controlled(vec![ClassicalCondition::bit(bit)], gates);
    }
    // Fixups keyed by the stabilizer measurement bits.
    for (bit, q) in [(0usize, 0usize), (2, 2), (3, 1)] {
        c.push_controlled(vec![ClassicalCondition::bit(bit)], vec![Gate::z(q)]);
    }
    for q in 0..3 {
        c.push_gate(Gate::x(q));
    }

    // Detection: the all-ancilla stabilizer bit XOR the eight ancilla
    // readout bits must be 0, else the run is discarded.
    c.push_postselect(ClassicalCondition::parity_of(&[
        1, 4, 5, 6, 7, 8, 9, 10, 11,
    ]));

    c.outputs.push(OutputSpec::output(
        vec![0, 1, 2],
        ReferenceState::Ccz,
    ));
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let c = build_ccz_factory();
        c.validate().unwrap();
        assert_eq!(c.num_qubits, 15);
        assert_eq!(c.injection_sites.len(), 8);
        assert_eq!(
            c.site_labels(),
            vec!["a", "b", "c", "d", "e", "f", "g", "h"]
        );
        assert_eq!(c.num_measurements(), 12);
    }

    #[test]
    fn builder_is_deterministic() {
        assert_eq!(build_ccz_factory(), build_ccz_factory());
    }
}
