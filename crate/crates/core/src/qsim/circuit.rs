use super::gate::GateMatrix;
use super::state::{StateVector, MAX_FULL_MATRIX_QUBITS};
use super::MAX_QUBITS;
use crate::error::{Error, Result};

/// One gate application: a `2^k x 2^k` unitary on `k` target qubits,
/// conditioned on every control qubit being `|1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOp {
    gate: GateMatrix,
    targets: Vec<usize>,
    controls: Vec<usize>,
}

impl CircuitOp {
    pub fn new(gate: GateMatrix, targets: Vec<usize>, controls: Vec<usize>) -> Result<Self> {
        if gate.dim() != 1 << targets.len() {
            return Err(Error::DimensionMismatch {
                expected: 1 << targets.len(),
                actual: gate.dim(),
            });
        }
        let op = Self { gate, targets, controls };
        op.check_distinct()?;
        Ok(op)
    }

    pub fn single(gate: GateMatrix, target: usize) -> Self {
        assert_eq!(gate.dim(), 2, "single-qubit op needs a 2x2 gate");
        Self { gate, targets: vec![target], controls: vec![] }
    }

    pub fn controlled(gate: GateMatrix, controls: Vec<usize>, target: usize) -> Result<Self> {
        Self::new(gate, vec![target], controls)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::controlled(GateMatrix::x(), vec![control], target).expect("distinct qubits")
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self::controlled(GateMatrix::z(), vec![control], target).expect("distinct qubits")
    }

    /// Toffoli: flips `target` when both controls are `|1>`.
    pub fn ccx(c1: usize, c2: usize, target: usize) -> Self {
        Self::controlled(GateMatrix::x(), vec![c1, c2], target).expect("distinct qubits")
    }

    /// A full-register unitary acting on qubits `0..n`.
    pub fn full(gate: GateMatrix) -> Self {
        let n = gate.n_qubits();
        Self { gate, targets: (0..n).collect(), controls: vec![] }
    }

    pub fn gate(&self) -> &GateMatrix {
        &self.gate
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    fn check_distinct(&self) -> Result<()> {
        let all: Vec<usize> = self.targets.iter().chain(&self.controls).copied().collect();
        for (i, q) in all.iter().enumerate() {
            if all[..i].contains(q) {
                return Err(Error::OverlappingQubits(*q));
            }
        }
        Ok(())
    }

    pub(crate) fn validate(&self, n_qubits: usize) -> Result<()> {
        self.check_distinct()?;
        if let Some(&q) = self.targets.iter().chain(&self.controls).find(|&&q| q >= n_qubits) {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if self.targets.len() > MAX_FULL_MATRIX_QUBITS {
            return Err(Error::UnsupportedQubitCount(self.targets.len()));
        }
        Ok(())
    }
}

/// Ordered gate list on a fixed register, plus the qubits read at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<CircuitOp>,
    measured: Vec<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::UnsupportedQubitCount(n_qubits));
        }
        Ok(Self { n_qubits, ops: Vec::new(), measured: Vec::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn push(&mut self, op: CircuitOp) -> Result<&mut Self> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    pub fn h(&mut self, q: usize) -> Result<&mut Self> {
        self.push(CircuitOp::single(GateMatrix::h(), q))
    }

    pub fn x(&mut self, q: usize) -> Result<&mut Self> {
        self.push(CircuitOp::single(GateMatrix::x(), q))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(CircuitOp::controlled(GateMatrix::x(), vec![control], target)?)
    }

    pub fn ccx(&mut self, c1: usize, c2: usize, target: usize) -> Result<&mut Self> {
        self.push(CircuitOp::controlled(GateMatrix::x(), vec![c1, c2], target)?)
    }

    /// Replaces the measured set; outcome bit `j` is qubit `qubits[j]`.
    pub fn measure(&mut self, qubits: &[usize]) -> Result<&mut Self> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::OverlappingQubits(q));
            }
        }
        self.measured = qubits.to_vec();
        Ok(self)
    }

    pub fn measure_all(&mut self) -> &mut Self {
        self.measured = (0..self.n_qubits).collect();
        self
    }

    /// Runs every op on `initial` and returns the final state.
    pub fn evolve(&self, initial: &StateVector) -> Result<StateVector> {
        if initial.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.n_qubits,
                actual: initial.len(),
            });
        }
        let mut state = initial.clone();
        for op in &self.ops {
            state.apply(op)?;
        }
        Ok(state)
    }

    /// Final state starting from `|0...0>`.
    pub fn final_state(&self) -> Result<StateVector> {
        self.evolve(&StateVector::zero(self.n_qubits)?)
    }

    /// Exact distribution of the measured register.
    pub fn outcome_probabilities(&self) -> Result<Vec<f64>> {
        if self.measured.is_empty() {
            return Err(Error::EmptyMeasurement);
        }
        self.final_state()?.marginal(&self.measured)
    }

    /// The circuit's full unitary, column `j` being the image of `|j>`.
    pub fn unitary(&self) -> Result<GateMatrix> {
        if self.n_qubits > MAX_FULL_MATRIX_QUBITS {
            return Err(Error::UnsupportedQubitCount(self.n_qubits));
        }
        let dim = 1usize << self.n_qubits;
        let mut entries = vec![num_complex::Complex64::ZERO; dim * dim];
        for col in 0..dim {
            let out = self.evolve(&StateVector::new(self.n_qubits, col)?)?;
            for (row, a) in out.amplitudes().iter().enumerate() {
                entries[row * dim + col] = *a;
            }
        }
        GateMatrix::from_rows(dim, entries)
    }
}
