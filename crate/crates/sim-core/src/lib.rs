//! Dense state-vector simulation of small post-selected quantum circuits.
//!
//! This crate simulates circuits of up to ~16 qubits exactly, with the
//! primitives needed by magic-state factory verification:
//!
//! - parameterized phase gates (`Z^θ` for arbitrary angles given in degrees),
//! - Pauli-product measurements with optional forced outcomes,
//! - post-selection conditions over the classical measurement record,
//! - classically controlled Pauli fixups,
//! - labeled Z-error injection sites for exhaustive error enumeration.
//!
//! Qubit `q` corresponds to bit `q` of the amplitude index, so qubit 0 is the
//! least significant bit. All randomness is drawn from a seeded ChaCha stream;
//! the same circuit, seed, and injected-error set replay bit-identically.

mod circuit;
mod error;
mod gate;
mod run;
mod state;

pub use circuit::{
    Circuit, ClassicalCondition, InjectionSite, Measurement, Op, OutputRole, OutputSpec,
    ReferenceState,
};
pub use error::SimError;
pub use gate::{Axis, Control, Gate, GateKind, PauliAxis};
pub use run::{enumerate_branches, postselect, run_circuit, run_circuit_from, run_circuit_with};
pub use run::{Branch, Postselection, RunOptions, RunOutcome};
pub use state::{tensor, QuantumState};

/// Tolerance for fidelity-style assertions (states compared after many gates).
pub const FIDELITY_TOL: f64 = 1e-9;

/// Tolerance for algebraic identities checked over a handful of gates.
pub const ALGEBRA_TOL: f64 = 1e-12;
