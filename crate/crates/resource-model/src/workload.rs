use serde::{Deserialize, Serialize};

use crate::ModelError;

fn default_version() -> u32 {
    1
}

/// Gate counts and space for one algorithm run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Workload {
    #[serde(default = "default_version")]
    pub version: u32,
    pub toffoli_count: u64,
    pub t_count: u64,
    pub logical_qubits: u64,
    pub error_budget: f64,
}

impl Workload {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.error_budget > 0.0 && self.error_budget < 1.0) {
            return Err(ModelError::BadErrorBudget(self.error_budget));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.toffoli_count == 0 && self.t_count == 0
    }
}

/// Workload for factoring an `n_bits` RSA-style modulus: 12 n^3 Toffoli
/// gates and 3 n logical qubits.
pub fn factoring_workload(n_bits: u32) -> Result<Workload, ModelError> {
    if n_bits < 8 {
        return Err(ModelError::BitsTooSmall(n_bits));
    }
    let n = n_bits as u64;
    Ok(Workload {
        version: 1,
        toffoli_count: 12 * n * n * n,
        t_count: 0,
        logical_qubits: 3 * n,
        error_budget: 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factoring_arithmetic() {
        let w = factoring_workload(1024).unwrap();
        assert_eq!(w.toffoli_count, 12_884_901_888);
        assert_eq!(w.logical_qubits, 3072);
        assert_eq!(w.t_count, 0);

        let w = factoring_workload(4096).unwrap();
        assert_eq!(w.toffoli_count, 824_633_720_832);

        let w = factoring_workload(8).unwrap();
        assert_eq!(w.toffoli_count, 6144);
        assert_eq!(w.logical_qubits, 24);
    }

    #[test]
    fn too_small_moduli_are_rejected() {
        assert!(matches!(
            factoring_workload(7),
            Err(ModelError::BitsTooSmall(7))
        ));
    }

    #[test]
    fn workload_json_round_trip_with_version() {
        let w = factoring_workload(64).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.contains("\"version\":1"));
        let back: Workload = serde_json::from_str(&json).unwrap();
        assert_eq!(w, back);
        // Version defaults when absent.
        let bare: Workload = serde_json::from_str(
            r#"{"toffoli_count": 5, "t_count": 2, "logical_qubits": 10, "error_budget": 0.1}"#,
        )
        .unwrap();
        assert_eq!(bare.version, 1);
    }
}
