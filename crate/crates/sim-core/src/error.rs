use thiserror::Error;

/// Errors raised by state manipulation, circuit validation, and execution.
#[derive(Debug, Clone, Error)]
pub enum SimError {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate operands overlap or repeat a qubit")]
    OverlappingOperands,

    #[error("gate {kind} expects {expected} target(s), got {got}")]
    TargetArity {
        kind: String,
        expected: usize,
        got: usize,
    },

    #[error("states have different qubit counts")]
    DimensionMismatch,

    #[error("amplitude vector length {len} is not a power of two")]
    BadStateLength { len: usize },

    #[error("state norm {norm} is not 1")]
    NotNormalized { norm: f64 },

    #[error("empty Pauli product")]
    EmptyPauliProduct,

    #[error("forced measurement outcome has probability {prob:.3e}")]
    ImpossibleForcedOutcome { prob: f64 },

    #[error("classical condition references record index {index} but only {recorded} bits are recorded")]
    RecordIndexOutOfRange { index: usize, recorded: usize },

    #[error("unknown injection site label `{label}`")]
    UnknownInjectionSite { label: String },

    #[error("branch enumeration exceeded the limit of {limit} branches")]
    BranchLimit { limit: usize },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}
