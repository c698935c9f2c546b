use num_complex::Complex64;
use rand::Rng;

use crate::error::SimError;
use crate::gate::PauliAxis;

/// Threshold below which a measurement branch is treated as impossible.
const PROB_FLOOR: f64 = 1e-12;

/// A pure state over `num_qubits` qubits plus the classical measurement record
/// accumulated so far.
///
/// Qubit `q` is bit `q` of the amplitude index (little-endian).
#[derive(Clone, Debug)]
pub struct QuantumState {
    num_qubits: usize,
    amps: Vec<Complex64>,
    record: Vec<bool>,
}

impl QuantumState {
    /// The all-zeros computational basis state |0…0⟩.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        QuantumState {
            num_qubits,
            amps,
            record: Vec::new(),
        }
    }

    /// Build a state from explicit amplitudes. The length must be a power of
    /// two and the vector must be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len == 0 || len & (len - 1) != 0 {
            return Err(SimError::BadStateLength { len });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NotNormalized { norm });
        }
        Ok(QuantumState {
            num_qubits: len.trailing_zeros() as usize,
            amps,
            record: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Measurement outcomes in execution order; `false` is the +1 outcome.
    pub fn record(&self) -> &[bool] {
        &self.record
    }

    pub(crate) fn push_record(&mut self, bit: bool) {
        self.record.push(bit);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<(), SimError> {
        if q >= self.num_qubits {
            return Err(SimError::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Squared inner product |⟨self|other⟩|².
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64, SimError> {
        if self.num_qubits != other.num_qubits {
            return Err(SimError::DimensionMismatch);
        }
        let mut ip = Complex64::new(0.0, 0.0);
        for (a, b) in self.amps.iter().zip(other.amps.iter()) {
            ip += a.conj() * b;
        }
        Ok(ip.norm_sqr().min(1.0))
    }

    /// Fidelity of the reduced state on `qubits` against a pure reference,
    /// i.e. ⟨ref| Tr_rest(|ψ⟩⟨ψ|) |ref⟩. `qubits[j]` maps to bit `j` of the
    /// reference index.
    pub fn subsystem_fidelity(
        &self,
        qubits: &[usize],
        reference: &QuantumState,
    ) -> Result<f64, SimError> {
        if reference.num_qubits != qubits.len() {
            return Err(SimError::DimensionMismatch);
        }
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut seen = vec![false; self.num_qubits];
        for &q in qubits {
            if seen[q] {
                return Err(SimError::OverlappingOperands);
            }
            seen[q] = true;
        }
        let rest: Vec<usize> = (0..self.num_qubits).filter(|q| !seen[*q]).collect();
        let mut acc = vec![Complex64::new(0.0, 0.0); 1 << rest.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            let mut s = 0usize;
            for (j, &q) in qubits.iter().enumerate() {
                s |= ((i >> q) & 1) << j;
            }
            let mut r = 0usize;
            for (j, &q) in rest.iter().enumerate() {
                r |= ((i >> q) & 1) << j;
            }
            acc[r] += reference.amps[s].conj() * amp;
        }
        Ok(acc.iter().map(|a| a.norm_sqr()).sum::<f64>().min(1.0))
    }

    // --- internal amplitude kernels used by gate application ---

    /// Apply a 2x2 unitary to `target`, restricted to basis states whose
    /// control bits match `ctrl_val` under `ctrl_mask`.
    pub(crate) fn apply_single(
        &mut self,
        target: usize,
        m: [[Complex64; 2]; 2],
        ctrl_mask: usize,
        ctrl_val: usize,
    ) {
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & tbit != 0 {
                continue;
            }
            if i & ctrl_mask != ctrl_val {
                continue;
            }
            let j = i | tbit;
            let a = self.amps[i];
            let b = self.amps[j];
            self.amps[i] = m[0][0] * a + m[0][1] * b;
            self.amps[j] = m[1][0] * a + m[1][1] * b;
        }
    }

    /// Flip all bits in `target_mask` where the control pattern matches.
    pub(crate) fn apply_multi_x(&mut self, target_mask: usize, ctrl_mask: usize, ctrl_val: usize) {
        let anchor = target_mask & target_mask.wrapping_neg();
        for i in 0..self.amps.len() {
            if i & anchor != 0 {
                continue;
            }
            if i & ctrl_mask != ctrl_val {
                continue;
            }
            self.amps.swap(i, i ^ target_mask);
        }
    }

    /// Multiply amplitudes whose bits match the full pattern by `phase`.
    pub(crate) fn apply_phase_where(&mut self, bit_mask: usize, bit_val: usize, phase: Complex64) {
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & bit_mask == bit_val {
                *amp *= phase;
            }
        }
    }

    // --- Pauli product measurement ---

    /// Expectation value ⟨ψ|P|ψ⟩ of a Pauli product. ±1 eigenstates give ±1.
    pub fn pauli_product_expectation(
        &self,
        paulis: &[(usize, PauliAxis)],
    ) -> Result<f64, SimError> {
        let (xmask, zmask, ymask) = self.pauli_masks(paulis)?;
        let mut e = Complex64::new(0.0, 0.0);
        for (i, amp) in self.amps.iter().enumerate() {
            let j = i ^ xmask;
            e += amp.conj() * pauli_coeff(j, zmask, ymask) * self.amps[j];
        }
        debug_assert!(e.im.abs() < 1e-9);
        Ok(e.re.clamp(-1.0, 1.0))
    }

    /// Project onto the eigenspace of the Pauli product selected by `outcome`
    /// (`false` = +1) and renormalize. Returns the probability the projected
    /// branch had; fails if that probability is (numerically) zero.
    ///
    /// The outcome bit is appended to the measurement record.
    pub fn project_pauli_product(
        &mut self,
        paulis: &[(usize, PauliAxis)],
        outcome: bool,
    ) -> Result<f64, SimError> {
        let (xmask, zmask, ymask) = self.pauli_masks(paulis)?;
        let e = self.pauli_product_expectation(paulis)?;
        let sign = if outcome { -1.0 } else { 1.0 };
        let prob = ((1.0 + sign * e) / 2.0).clamp(0.0, 1.0);
        if prob < PROB_FLOOR {
            return Err(SimError::ImpossibleForcedOutcome { prob });
        }
        let s = Complex64::new(sign, 0.0);
        if xmask == 0 {
            // Diagonal product: keep matching components, zero the rest.
            for (i, amp) in self.amps.iter_mut().enumerate() {
                let c = pauli_coeff(i, zmask, ymask);
                *amp = (*amp + s * c * *amp) / 2.0;
            }
        } else {
            let anchor = xmask & xmask.wrapping_neg();
            for i in 0..self.amps.len() {
                if i & anchor != 0 {
                    continue;
                }
                let j = i ^ xmask;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = (a + s * pauli_coeff(j, zmask, ymask) * b) / 2.0;
                self.amps[j] = (b + s * pauli_coeff(i, zmask, ymask) * a) / 2.0;
            }
        }
        let norm = self.norm_sqr().sqrt();
        let inv = 1.0 / norm;
        for amp in &mut self.amps {
            *amp *= inv;
        }
        self.push_record(outcome);
        Ok(prob)
    }

    /// Measure a Pauli product. A forced outcome projects onto the requested
    /// eigenspace (erroring if its probability vanishes); otherwise the
    /// outcome is sampled from the Born rule using `rng`.
    pub fn measure_pauli_product(
        &mut self,
        paulis: &[(usize, PauliAxis)],
        forced: Option<bool>,
        rng: &mut impl Rng,
    ) -> Result<bool, SimError> {
        let outcome = match forced {
            Some(bit) => bit,
            None => {
                let e = self.pauli_product_expectation(paulis)?;
                let p_plus = ((1.0 + e) / 2.0).clamp(0.0, 1.0);
                rng.gen::<f64>() >= p_plus
            }
        };
        self.project_pauli_product(paulis, outcome)?;
        Ok(outcome)
    }

    fn pauli_masks(
        &self,
        paulis: &[(usize, PauliAxis)],
    ) -> Result<(usize, usize, usize), SimError> {
        if paulis.is_empty() {
            return Err(SimError::EmptyPauliProduct);
        }
        let (mut xmask, mut zmask, mut ymask) = (0usize, 0usize, 0usize);
        let mut seen = 0usize;
        for &(q, axis) in paulis {
            self.check_qubit(q)?;
            let bit = 1usize << q;
            if seen & bit != 0 {
                return Err(SimError::OverlappingOperands);
            }
            seen |= bit;
            match axis {
                PauliAxis::X => xmask |= bit,
                PauliAxis::Y => {
                    xmask |= bit;
                    ymask |= bit;
                }
                PauliAxis::Z => zmask |= bit,
            }
        }
        Ok((xmask, zmask, ymask))
    }
}

/// Coefficient c(i) in P|i⟩ = c(i)|i ⊕ xmask⟩ for a Pauli product with the
/// given Z and Y supports.
fn pauli_coeff(i: usize, zmask: usize, ymask: usize) -> Complex64 {
    let neg = ((i & (zmask | ymask)).count_ones() & 1) == 1;
    let ys = (ymask.count_ones() % 4) as usize;
    // i^ys, negated once per set bit under the Z/Y masks.
    const I_POW: [Complex64; 4] = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let mut c = I_POW[ys];
    if neg {
        c = -c;
    }
    c
}

/// Tensor product with `a` on the low qubit indices and `b` above them.
pub fn tensor(a: &QuantumState, b: &QuantumState) -> QuantumState {
    let n = a.num_qubits + b.num_qubits;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (j, bj) in b.amps.iter().enumerate() {
        if bj.norm_sqr() == 0.0 {
            continue;
        }
        for (i, ai) in a.amps.iter().enumerate() {
            amps[(j << a.num_qubits) | i] = ai * bj;
        }
    }
    let mut record = a.record.clone();
    record.extend_from_slice(&b.record);
    QuantumState {
        num_qubits: n,
        amps,
        record,
    }
}
