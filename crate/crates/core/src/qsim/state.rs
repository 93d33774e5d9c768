use num_complex::Complex64;

use super::circuit::CircuitOp;
use super::gate::{GateMatrix, UNITARY_TOLERANCE};
use super::MAX_QUBITS;
use crate::error::{Error, Result};

/// Largest register on which a full `2^n x 2^n` matrix may be applied.
pub const MAX_FULL_MATRIX_QUBITS: usize = 5;

/// Dense `2^n` amplitude vector.
///
/// Basis index bit `k` is qubit `q_k`, so the basis label `|q_{n-1} ... q_1 q_0>`
/// read as binary is the index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        Err(Error::UnsupportedQubitCount(n_qubits))
    } else {
        Ok(())
    }
}

impl StateVector {
    /// Computational basis state `|basis_index>` on `n_qubits` qubits.
    pub fn new(n_qubits: usize, basis_index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let len = 1usize << n_qubits;
        if basis_index >= len {
            return Err(Error::BasisIndexOutOfRange {
                index: basis_index,
                n_qubits,
            });
        }
        let mut amps = vec![Complex64::ZERO; len];
        amps[basis_index] = Complex64::ONE;
        Ok(Self { n_qubits, amps })
    }

    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, 0)
    }

    /// Wraps explicit amplitudes. The length must be a power of two and the
    /// vector must be normalized to within `1e-10`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                actual: len,
            });
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteAmplitude);
        }
        let s = Self { n_qubits, amps };
        let dev = (s.norm_sqr() - 1.0).abs();
        if dev > UNITARY_TOLERANCE {
            return Err(Error::NotNormalized(dev));
        }
        Ok(s)
    }

    /// Real-valued convenience wrapper around [`StateVector::from_amplitudes`].
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amps.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|a ⊗ b>`: `self` occupies the high-order qubits.
    pub fn tensor(&self, low: &StateVector) -> Result<Self> {
        let n = self.n_qubits + low.n_qubits;
        check_qubits(n)?;
        let mut amps = Vec::with_capacity(self.len() * low.len());
        for a in &self.amps {
            for b in &low.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Applies a (possibly controlled, possibly multi-target) gate in place.
    ///
    /// Target `j` of the op is bit `j` of the gate's local basis index.
    pub fn apply(&mut self, op: &CircuitOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        let k = op.targets().len();
        let local = 1usize << k;
        let gate = op.gate();

        let control_mask = op.controls().iter().fold(0usize, |m, &q| m | (1 << q));
        let target_mask = op.targets().iter().fold(0usize, |m, &q| m | (1 << q));
        // Offsets of the 2^k local basis states relative to a base index.
        let offsets: Vec<usize> = (0..local)
            .map(|l| {
                op.targets()
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| l >> j & 1 == 1)
                    .fold(0usize, |acc, (_, &q)| acc | (1 << q))
            })
            .collect();

        let mut scratch = vec![Complex64::ZERO; local];
        for base in 0..self.amps.len() {
            if base & target_mask != 0 || base & control_mask != control_mask {
                continue;
            }
            for (s, &off) in scratch.iter_mut().zip(&offsets) {
                *s = self.amps[base | off];
            }
            for (r, &off) in offsets.iter().enumerate() {
                let row = gate.row(r);
                self.amps[base | off] = row.iter().zip(&scratch).map(|(g, a)| g * a).sum();
            }
        }
        Ok(())
    }

    /// Multiplies the whole amplitude vector by a `2^n x 2^n` unitary.
    ///
    /// The matrix was validated as unitary when it was built; only registers
    /// up to [`MAX_FULL_MATRIX_QUBITS`] qubits are accepted.
    pub fn apply_matrix(&mut self, full: &GateMatrix) -> Result<()> {
        if full.dim() != self.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                actual: full.dim(),
            });
        }
        if self.n_qubits > MAX_FULL_MATRIX_QUBITS {
            return Err(Error::UnsupportedQubitCount(self.n_qubits));
        }
        let out: Vec<Complex64> = (0..full.dim())
            .map(|r| full.row(r).iter().zip(&self.amps).map(|(g, a)| g * a).sum())
            .collect();
        self.amps = out;
        Ok(())
    }

    /// `|a_i|^2` for every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Marginal distribution of `qubits`; outcome bit `j` is `qubits[j]`.
    pub fn marginal(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::OverlappingQubits(q));
            }
        }
        let mut out = vec![0.0; 1 << qubits.len()];
        for (idx, z) in self.amps.iter().enumerate() {
            let outcome = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, &q)| acc | ((idx >> q & 1) << j));
            out[outcome] += z.norm_sqr();
        }
        Ok(out)
    }

    /// Squared modulus of the mean amplitude, `|(1/2^n) Σ a_i|^2`.
    pub fn mean_squared_amplitude(&self) -> f64 {
        let sum: Complex64 = self.amps.iter().sum();
        (sum / self.amps.len() as f64).norm_sqr()
    }

    /// Largest entrywise distance to `other`; infinite on size mismatch.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.amps.len() != other.amps.len() {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Debug dump as a JSON array of `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.amps
                .iter()
                .map(|z| serde_json::json!([z.re, z.im]))
                .collect(),
        )
    }
}
