//! Functional verification of the circuit builders by exact simulation:
//! error-free outputs, detection of injected errors, and branch-by-branch
//! equivalences.

use std::collections::BTreeSet;

use msf_circuits::*;
use msf_sim_core::{
    enumerate_branches, run_circuit, run_circuit_from, run_circuit_with, tensor, Circuit,
    ClassicalCondition, Gate, Measurement, OutputSpec, QuantumState, ReferenceState, RunOptions,
    FIDELITY_TOL,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn no_errors() -> BTreeSet<String> {
    BTreeSet::new()
}

fn inject(labels: &[&str]) -> BTreeSet<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

fn random_state(n: usize, seed: u64) -> QuantumState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    QuantumState::from_amplitudes(amps).unwrap()
}

/// Pull out the pure state of `qubits` from a product-form global state
/// (valid once every other qubit has collapsed to a basis state).
fn extract_pure_subsystem(state: &QuantumState, qubits: &[usize]) -> QuantumState {
    let imax = state
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits.len()];
    for (s, amp) in amps.iter_mut().enumerate() {
        let mut idx = imax;
        for (j, &q) in qubits.iter().enumerate() {
            idx = (idx & !(1 << q)) | (((s >> j) & 1) << q);
        }
        *amp = state.amplitudes()[idx];
    }
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    assert!(norm > 0.999, "subsystem is not in product form");
    for a in &mut amps {
        *a /= norm;
    }
    QuantumState::from_amplitudes(amps).unwrap()
}

// ---------------------------------------------------------------- 8T→CCZ

#[test]
fn ccz_factory_error_free_outputs_ccz() {
    let c = build_ccz_factory();
    for seed in 0..5 {
        let out = run_circuit(&c, seed, &no_errors()).unwrap();
        assert!(out.accepted);
        let f = out.output_fidelities(&c).unwrap()[0];
        assert!(f > 1.0 - FIDELITY_TOL, "seed {seed}: fidelity {f}");
    }
}

#[test]
fn ccz_factory_error_free_passes_on_every_branch() {
    let c = build_ccz_factory();
    let branches = enumerate_branches(&c, &no_errors(), 1 << 13).unwrap();
    // 4 stabilizer bits and 8 ancilla readouts, minus one parity constraint:
    // in the error-free run the last ancilla outcome is fixed by the others,
    // which is exactly why the post-selection never fires.
    assert_eq!(branches.len(), 1 << 11);
    let mut total = 0.0;
    for b in &branches {
        total += b.probability;
        assert!(b.outcome.accepted, "record {:?}", b.outcome.record());
        let f = b.outcome.output_fidelities(&c).unwrap()[0];
        assert!(f > 1.0 - FIDELITY_TOL, "branch fidelity {f}");
    }
    assert!((total - 1.0).abs() < 1e-6);
}

#[test]
fn ccz_factory_catches_every_single_error() {
    let c = build_ccz_factory();
    for site in c.site_labels() {
        for seed in [1, 99] {
            let out = run_circuit(&c, seed, &inject(&[site])).unwrap();
            assert!(!out.accepted, "single Z at {site} escaped");
        }
    }
}

#[test]
fn ccz_factory_passes_all_28_error_pairs_and_all_are_harmful() {
    let c = build_ccz_factory();
    let labels = c.site_labels();
    let mut pairs = 0;
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            let out = run_circuit(&c, 7, &inject(&[labels[i], labels[j]])).unwrap();
            assert!(out.accepted, "pair ({}, {}) was detected", labels[i], labels[j]);
            let f = out.output_fidelities(&c).unwrap()[0];
            assert!(
                f < 1.0 - 1e-6,
                "pair ({}, {}) left fidelity {f}",
                labels[i],
                labels[j]
            );
            pairs += 1;
        }
    }
    assert_eq!(pairs, 28);
}

// ---------------------------------------------------------------- 15-to-1

#[test]
fn fifteen_to_one_error_free_outputs_t() {
    let c = build_fifteen_to_one();
    for seed in 0..5 {
        let out = run_circuit(&c, seed, &no_errors()).unwrap();
        assert!(out.accepted);
        let f = out.output_fidelities(&c).unwrap()[0];
        assert!(f > 1.0 - FIDELITY_TOL, "seed {seed}: fidelity {f}");
    }
}

#[test]
fn fifteen_to_one_rejects_every_single_error() {
    let c = build_fifteen_to_one();
    for site in c.site_labels() {
        let out = run_circuit(&c, 3, &inject(&[site])).unwrap();
        assert!(!out.accepted, "single Z at {site} escaped");
    }
}

#[test]
fn fifteen_to_one_weight_three_logical_triples_pass_and_flip_the_output() {
    // {u, v, u⊕v} has even overlap with every X generator, so it escapes
    // detection; it acts as a logical Z and sends |T⟩ to an orthogonal state.
    let c = build_fifteen_to_one();
    let out = run_circuit(&c, 11, &inject(&["t1", "t2", "t3"])).unwrap(); // 1⊕2=3
    assert!(out.accepted);
    let f = out.output_fidelities(&c).unwrap()[0];
    assert!(f < 1e-6, "logical triple left fidelity {f}");

    // A triple with nonzero syndrome is caught.
    let out = run_circuit(&c, 11, &inject(&["t1", "t2", "t4"])).unwrap();
    assert!(!out.accepted);
}

// ---------------------------------------------------------------- C2T

#[test]
fn c2t_simple_turns_ccz_into_three_t_states() {
    let c = build_c2t_simple();
    let out = run_circuit(&c, 0, &no_errors()).unwrap();
    assert!(out.accepted);
    for (q, f) in out.output_fidelities(&c).unwrap().iter().enumerate() {
        assert!(f > &(1.0 - FIDELITY_TOL), "output {q}: fidelity {f}");
    }
}

#[test]
fn c2t_simple_on_plus_plus_plus_is_not_three_t_states() {
    let c = build_c2t_simple_with(C2tInput::PlusPlusPlus);
    let out = run_circuit(&c, 0, &no_errors()).unwrap();
    let fids = out.output_fidelities(&c).unwrap();
    assert!(
        fids.iter().any(|f| *f < 1.0 - 1e-3),
        "mismatched input still produced T states: {fids:?}"
    );
}

#[test]
fn c2t_simple_internal_t_can_be_teleported_from_a_previous_output() {
    // Replace the inline T† with gate teleportation powered by a |T⟩ state
    // (as if fed from the previous round's third output): CNOT onto the
    // helper, measure, S fixup on the hit branch, then an S† to turn the
    // teleported T into T†.
    let mut c = Circuit::new("c2t-teleported", 4);
    for q in 0..3 {
        c.push_gate(Gate::h(q));
    }
    c.push_gate(Gate::ccz(0, 1, 2));
    c.push_gate(Gate::h(3));
    c.push_gate(Gate::t(3));
    c.push_gate(Gate::x_neg_half(2));
    c.push_gate(Gate::multi_cnot(
        vec![0, 1],
        vec![msf_sim_core::Control::z_anti(2)],
    ));
    for t in [0, 1] {
        c.push_gate(Gate::z(t).with_controls(vec![msf_sim_core::Control::x(2)]));
    }
    c.push_gate(Gate::cnot(2, 3));
    c.push_measure(Measurement::z(3));
    c.push_controlled(vec![ClassicalCondition::bit(0)], vec![Gate::s(2)]);
    c.push_gate(Gate::s_dag(2));
    for t in [0, 1] {
        c.push_gate(Gate::z(t).with_controls(vec![msf_sim_core::Control::x(2)]));
    }
    for q in 0..3 {
        c.outputs
            .push(OutputSpec::output(vec![q], ReferenceState::T));
    }

    let branches = enumerate_branches(&c, &no_errors(), 8).unwrap();
    assert_eq!(branches.len(), 2);
    for b in &branches {
        for f in b.outcome.output_fidelities(&c).unwrap() {
            assert!(f > 1.0 - FIDELITY_TOL, "teleported variant fidelity {f}");
        }
    }
}

#[test]
fn c2t_surgery_produces_three_t_states_on_200_seeded_runs() {
    let c = build_c2t_surgery();
    for seed in 0..200 {
        let out = run_circuit(&c, seed, &no_errors()).unwrap();
        assert!(out.accepted);
        for (q, f) in out.output_fidelities(&c).unwrap().iter().enumerate() {
            assert!(
                f > &(1.0 - FIDELITY_TOL),
                "seed {seed} output {q}: fidelity {f}"
            );
        }
    }
}

#[test]
fn c2t_surgery_matches_c2t_simple_branch_by_branch() {
    let simple = build_c2t_simple();
    let simple_out = run_circuit(&simple, 0, &no_errors()).unwrap();
    let simple_state = simple_out.state;

    let surgery = build_c2t_surgery();
    let branches = enumerate_branches(&surgery, &no_errors(), 1 << 10).unwrap();
    assert!(branches.len() > 1);
    let mut total = 0.0;
    for b in &branches {
        total += b.probability;
        let f = b
            .outcome
            .state
            .subsystem_fidelity(&[0, 1, 2], &simple_state)
            .unwrap();
        assert!(f > 1.0 - FIDELITY_TOL, "branch disagreement, fidelity {f}");
    }
    assert!((total - 1.0).abs() < 1e-6);
}

#[test]
fn c2t_simple_composes_with_the_ccz_factory() {
    // Error-free factory output feeds the transformation circuit directly.
    let factory = build_ccz_factory();
    let factory_out = run_circuit(&factory, 21, &no_errors()).unwrap();
    assert!(factory_out.accepted);
    let ccz_state = extract_pure_subsystem(&factory_out.state, &[0, 1, 2]);

    let c2t = build_c2t_simple_with(C2tInput::None);
    let out = run_circuit_from(ccz_state, &c2t, &RunOptions::seeded(0)).unwrap();
    for f in out.output_fidelities(&c2t).unwrap() {
        assert!(f > 1.0 - FIDELITY_TOL, "composed fidelity {f}");
    }
}

// ------------------------------------------------------- phase catalysis

#[test]
fn phase_catalysis_at_45_degrees_emits_t_states() {
    let c = build_phase_catalysis(45.0).unwrap();
    let out = run_circuit(&c, 0, &no_errors()).unwrap();
    for f in out.output_fidelities(&c).unwrap() {
        assert!(f > 1.0 - FIDELITY_TOL, "fidelity {f}");
    }
}

#[test]
fn phase_catalysis_at_22_5_degrees_emits_sqrt_t_states() {
    let c = build_phase_catalysis(SQRT_T_DEGREES).unwrap();
    let out = run_circuit(&c, 0, &no_errors()).unwrap();
    for f in out.output_fidelities(&c).unwrap() {
        assert!(f > 1.0 - FIDELITY_TOL, "fidelity {f}");
    }
    assert_eq!(phase_catalysis_t_cost(SQRT_T_DEGREES), Some(5.0));
}

#[test]
fn phase_catalysis_applies_the_phase_to_arbitrary_data() {
    // Oracle: direct matrix application of Z^θ ⊗ Z^θ to the data state.
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for trial in 0..20 {
        let theta = rng.gen::<f64>() * 89.9 + 0.1;
        let c = build_phase_catalysis_with(theta, PhaseCatalysisPrep::None).unwrap();
        let data = random_state(2, 1000 + trial);
        let catalyst = ReferenceState::PhasePlus(theta).state();
        let initial = tensor(&tensor(&data, &catalyst), &QuantumState::zero(1));

        let mut expected = data.clone();
        expected.apply_gate(&Gate::phase(0, theta)).unwrap();
        expected.apply_gate(&Gate::phase(1, theta)).unwrap();

        let out = run_circuit_from(initial, &c, &RunOptions::seeded(trial)).unwrap();
        let data_fid = out
            .state
            .subsystem_fidelity(&[0, 1], &expected)
            .unwrap();
        let cat_fid = out.state.subsystem_fidelity(&[2], &catalyst).unwrap();
        assert!(
            data_fid > 1.0 - FIDELITY_TOL,
            "θ={theta}: data fidelity {data_fid}"
        );
        assert!(
            cat_fid > 1.0 - FIDELITY_TOL,
            "θ={theta}: catalyst fidelity {cat_fid}"
        );
    }
}

#[test]
fn phase_catalysis_preserves_the_catalyst_on_every_branch() {
    for theta in [10.0, 22.5, 45.0, 67.5, 90.0] {
        let c = build_phase_catalysis(theta).unwrap();
        let catalyst = ReferenceState::PhasePlus(theta).state();
        let branches = enumerate_branches(&c, &no_errors(), 8).unwrap();
        assert_eq!(branches.len(), 2, "uncompute branches at θ={theta}");
        for b in &branches {
            let f = b.outcome.state.subsystem_fidelity(&[2], &catalyst).unwrap();
            assert!(f > 1.0 - FIDELITY_TOL, "θ={theta}: catalyst fidelity {f}");
            for q in [0, 1] {
                let f = b
                    .outcome
                    .state
                    .subsystem_fidelity(&[q], &catalyst)
                    .unwrap();
                assert!(f > 1.0 - FIDELITY_TOL, "θ={theta} output {q}: {f}");
            }
        }
    }
}

#[test]
fn run_circuit_with_unknown_site_label_errors() {
    let c = build_ccz_factory();
    let err = run_circuit_with(&c, &RunOptions::seeded(0).with_injected(&["zz"]));
    assert!(err.is_err());
}
