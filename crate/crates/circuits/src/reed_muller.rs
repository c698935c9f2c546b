use msf_sim_core::{
    Circuit, ClassicalCondition, Gate, Measurement, OutputSpec, PauliAxis, ReferenceState,
};

/// Qubits in the support of X-stabilizer generator `i` (0..4): the
/// coordinates `v ∈ {1..15}` whose bit `i` is set. Weight 8.
pub fn x_generator_support(i: usize) -> Vec<usize> {
    assert!(i < 4);
    (0..15).filter(|q| (q + 1) & (1 << i) != 0).collect()
}

/// Supports of the ten Z-stabilizer generators: the four coordinate rows
/// (weight 8) followed by the six pairwise intersections (weight 4).
pub fn z_generator_supports() -> Vec<Vec<usize>> {
    let mut gens: Vec<Vec<usize>> = (0..4).map(x_generator_support).collect();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mask = (1 << i) | (1 << j);
            gens.push((0..15).filter(|q| (q + 1) & mask == mask).collect());
        }
    }
    gens
}

/// 15-to-1 T-state distillation on the 15-qubit Reed-Muller code.
///
/// Layout (16 qubits): qubits 0..=14 are the code block ("q1".."q15",
/// coordinate `q+1` as a 4-bit vector), qubit 15 is the distilled output.
///
/// The encoded |+⟩ is prepared by projecting |+⟩^⊗15 onto the +1 eigenspace
/// of the ten Z-stabilizer generators (forced outcomes; the projections are
/// part of state preparation, not error detection). Each code qubit then
/// receives one noisy T-type gate: transversal T† acts as the logical T on
/// this code, so the error-free block carries |T⟩ encoded. The four
/// X-stabilizer generators are measured and post-selected on +1; any Z error
/// pattern with a nonzero syndrome is discarded. Finally the logical qubit is
/// teleported onto the output qubit with a Z_L⊗Z_out parity measurement, an
/// X_L measurement, and Pauli fixups.
pub fn build_fifteen_to_one() -> Circuit {
    let mut c = Circuit::new("t15", 16);
    for q in 0..15 {
        c.label(q, format!("q{}", q + 1));
    }
    c.label(15, "out");

    for q in 0..16 {
        c.push_gate(Gate::h(q));
    }
    // State preparation: r0..r9, all forced to the +1 outcome.
    for support in z_generator_supports() {
        let paulis = support.into_iter().map(|q| (q, PauliAxis::Z)).collect();
        c.push_measure(Measurement::pauli_product(paulis).forced(false));
    }

    // Fifteen noisy T inputs.
    for q in 0..15 {
        c.push_gate(Gate::t_dag(q));
        c.push_injection_site(format!("t{}", q + 1), q);
    }

    // Error detection: r10..r13, post-selected on +1.
    for i in 0..4 {
        let paulis = x_generator_support(i)
            .into_iter()
            .map(|q| (q, PauliAxis::X))
            .collect();
        c.push_measure(Measurement::pauli_product(paulis));
    }
    for bit in 10..14 {
        c.push_postselect(ClassicalCondition::bit(bit));
    }

    // Teleport the logical qubit onto the output: r14, r15.
    let mut zz: Vec<(usize, PauliAxis)> = (0..15).map(|q| (q, PauliAxis::Z)).collect();
    zz.push((15, PauliAxis::Z));
    c.push_measure(Measurement::pauli_product(zz));
    let xl: Vec<(usize, PauliAxis)> = (0..15).map(|q| (q, PauliAxis::X)).collect();
    c.push_measure(Measurement::pauli_product(xl));
    c.push_controlled(vec![ClassicalCondition::bit(14)], vec![Gate::x(15)]);
    c.push_controlled(vec![ClassicalCondition::bit(15)], vec![Gate::z(15)]);

    c.outputs
        .push(OutputSpec::output(vec![15], ReferenceState::T));
    c
}
