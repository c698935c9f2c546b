use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::SimError;
use crate::state::QuantumState;

/// Control axis for a controlled gate. A Z-axis control conditions on a
/// computational basis state; an X-axis control is the same control
/// conjugated by Hadamards, so it conditions on |+⟩/|−⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    Z,
    X,
}

/// Single-qubit Pauli axis, used for Pauli-product measurements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PauliAxis::X => write!(f, "X"),
            PauliAxis::Y => write!(f, "Y"),
            PauliAxis::Z => write!(f, "Z"),
        }
    }
}

/// A control terminal: the gate fires on the `on` eigenvalue of the chosen
/// axis. `on = true` means |1⟩ for a Z-axis control and |−⟩ for an X-axis
/// control (a plain control surrounded by Hadamards).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub axis: Axis,
    pub on: bool,
}

impl Control {
    pub fn z(qubit: usize) -> Self {
        Control {
            qubit,
            axis: Axis::Z,
            on: true,
        }
    }

    pub fn z_anti(qubit: usize) -> Self {
        Control {
            qubit,
            axis: Axis::Z,
            on: false,
        }
    }

    /// X-axis control firing on |−⟩.
    pub fn x(qubit: usize) -> Self {
        Control {
            qubit,
            axis: Axis::X,
            on: true,
        }
    }
}

/// Gate alphabet. Angles are in degrees; `Phase(45°)` is the T gate,
/// `Phase(22.5°)` is √T and `Phase(90°)` is S.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    SDag,
    T,
    TDag,
    Phase(f64),
    XHalf,
    XNegHalf,
    Cnot,
    Cz,
    Ccz,
    MultiTargetCnot,
}

impl GateKind {
    fn target_arity(&self) -> Option<usize> {
        match self {
            GateKind::Cnot | GateKind::Cz => Some(2),
            GateKind::Ccz => Some(3),
            GateKind::MultiTargetCnot => None,
            _ => Some(1),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GateKind::H => "h".into(),
            GateKind::X => "x".into(),
            GateKind::Y => "y".into(),
            GateKind::Z => "z".into(),
            GateKind::S => "s".into(),
            GateKind::SDag => "s_dag".into(),
            GateKind::T => "t".into(),
            GateKind::TDag => "t_dag".into(),
            GateKind::Phase(deg) => format!("phase({deg})"),
            GateKind::XHalf => "x_half".into(),
            GateKind::XNegHalf => "x_neg_half".into(),
            GateKind::Cnot => "cnot".into(),
            GateKind::Cz => "cz".into(),
            GateKind::Ccz => "ccz".into(),
            GateKind::MultiTargetCnot => "mcx".into(),
        }
    }
}

/// A gate application: a kind, its target qubits, and extra control
/// terminals. For `Cnot` the first target is the control; `Cz` and `Ccz`
/// are symmetric in their targets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Self {
        Gate {
            kind,
            targets,
            controls: Vec::new(),
        }
    }

    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::H, vec![q])
    }
    pub fn x(q: usize) -> Self {
        Gate::new(GateKind::X, vec![q])
    }
    pub fn y(q: usize) -> Self {
        Gate::new(GateKind::Y, vec![q])
    }
    pub fn z(q: usize) -> Self {
        Gate::new(GateKind::Z, vec![q])
    }
    pub fn s(q: usize) -> Self {
        Gate::new(GateKind::S, vec![q])
    }
    pub fn s_dag(q: usize) -> Self {
        Gate::new(GateKind::SDag, vec![q])
    }
    pub fn t(q: usize) -> Self {
        Gate::new(GateKind::T, vec![q])
    }
    pub fn t_dag(q: usize) -> Self {
        Gate::new(GateKind::TDag, vec![q])
    }
    pub fn phase(q: usize, degrees: f64) -> Self {
        Gate::new(GateKind::Phase(degrees), vec![q])
    }
    pub fn x_half(q: usize) -> Self {
        Gate::new(GateKind::XHalf, vec![q])
    }
    pub fn x_neg_half(q: usize) -> Self {
        Gate::new(GateKind::XNegHalf, vec![q])
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cnot, vec![control, target])
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Cz, vec![a, b])
    }
    pub fn ccz(a: usize, b: usize, c: usize) -> Self {
        Gate::new(GateKind::Ccz, vec![a, b, c])
    }
    pub fn multi_cnot(targets: Vec<usize>, controls: Vec<Control>) -> Self {
        Gate {
            kind: GateKind::MultiTargetCnot,
            targets,
            controls,
        }
    }

    pub fn with_controls(mut self, controls: Vec<Control>) -> Self {
        self.controls = controls;
        self
    }

    pub fn validate(&self, num_qubits: usize) -> Result<(), SimError> {
        if let Some(expected) = self.kind.target_arity() {
            if self.targets.len() != expected {
                return Err(SimError::TargetArity {
                    kind: self.kind.name(),
                    expected,
                    got: self.targets.len(),
                });
            }
        } else if self.targets.is_empty() {
            return Err(SimError::TargetArity {
                kind: self.kind.name(),
                expected: 1,
                got: 0,
            });
        }
        let mut seen = 0usize;
        for &q in self.targets.iter().chain(self.controls.iter().map(|c| &c.qubit)) {
            if q >= num_qubits {
                return Err(SimError::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
            let bit = 1usize << q;
            if seen & bit != 0 {
                return Err(SimError::OverlappingOperands);
            }
            seen |= bit;
        }
        Ok(())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 matrix for the single-target gate kinds. Phase angles are degrees.
fn single_qubit_matrix(kind: &GateKind) -> Option<[[Complex64; 2]; 2]> {
    let f = std::f64::consts::FRAC_1_SQRT_2;
    Some(match kind {
        GateKind::H => [[c(f, 0.0), c(f, 0.0)], [c(f, 0.0), c(-f, 0.0)]],
        GateKind::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        GateKind::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
        GateKind::S => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]],
        GateKind::SDag => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]],
        GateKind::T | GateKind::TDag | GateKind::Phase(_) => {
            let degrees = match kind {
                GateKind::T => 45.0,
                GateKind::TDag => -45.0,
                GateKind::Phase(d) => *d,
                _ => unreachable!(),
            };
            let phase = Complex64::from_polar(1.0, degrees.to_radians());
            [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), phase]]
        }
        GateKind::XHalf => [
            [c(0.5, 0.5), c(0.5, -0.5)],
            [c(0.5, -0.5), c(0.5, 0.5)],
        ],
        GateKind::XNegHalf => [
            [c(0.5, -0.5), c(0.5, 0.5)],
            [c(0.5, 0.5), c(0.5, -0.5)],
        ],
        _ => return None,
    })
}

impl QuantumState {
    /// Apply a gate; the norm is preserved to machine precision.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        gate.validate(self.num_qubits())?;
        // X-axis controls are plain controls conjugated by H.
        for ctrl in &gate.controls {
            if ctrl.axis == Axis::X {
                self.apply_single(
                    ctrl.qubit,
                    single_qubit_matrix(&GateKind::H).unwrap(),
                    0,
                    0,
                );
            }
        }
        let mut ctrl_mask = 0usize;
        let mut ctrl_val = 0usize;
        for ctrl in &gate.controls {
            ctrl_mask |= 1 << ctrl.qubit;
            if ctrl.on {
                ctrl_val |= 1 << ctrl.qubit;
            }
        }
        match &gate.kind {
            GateKind::Cnot => {
                let mask = ctrl_mask | (1 << gate.targets[0]);
                let val = ctrl_val | (1 << gate.targets[0]);
                self.apply_multi_x(1 << gate.targets[1], mask, val);
            }
            GateKind::Cz => {
                let both = (1 << gate.targets[0]) | (1 << gate.targets[1]);
                self.apply_phase_where(ctrl_mask | both, ctrl_val | both, c(-1.0, 0.0));
            }
            GateKind::Ccz => {
                let all =
                    (1 << gate.targets[0]) | (1 << gate.targets[1]) | (1 << gate.targets[2]);
                self.apply_phase_where(ctrl_mask | all, ctrl_val | all, c(-1.0, 0.0));
            }
            GateKind::MultiTargetCnot => {
                let mut mask = 0usize;
                for &t in &gate.targets {
                    mask |= 1 << t;
                }
                self.apply_multi_x(mask, ctrl_mask, ctrl_val);
            }
            kind => {
                let m = single_qubit_matrix(kind).expect("single-qubit kind");
                self.apply_single(gate.targets[0], m, ctrl_mask, ctrl_val);
            }
        }
        for ctrl in &gate.controls {
            if ctrl.axis == Axis::X {
                self.apply_single(
                    ctrl.qubit,
                    single_qubit_matrix(&GateKind::H).unwrap(),
                    0,
                    0,
                );
            }
        }
        Ok(())
    }
}
