use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used when validating user-supplied unitaries.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Dense square complex matrix whose dimension is a power of two.
///
/// Stored row-major. Every public constructor either builds an exactly
/// unitary matrix or checks unitarity to [`UNITARY_TOLERANCE`].
#[derive(Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn finite(params: &[f64]) -> Result<()> {
    if params.iter().all(|p| p.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteParameter)
    }
}

impl GateMatrix {
    /// Builds a matrix from row-major entries and checks that it is unitary.
    pub fn from_rows(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two(),
                actual: dim,
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteAmplitude);
        }
        let m = Self { dim, entries };
        let err = m.unitarity_error();
        if err > UNITARY_TOLERANCE {
            return Err(Error::NonUnitary(err));
        }
        Ok(m)
    }

    /// Real-valued convenience wrapper around [`GateMatrix::from_rows`].
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_rows(dim, entries.iter().map(|&r| c(r, 0.0)).collect())
    }

    /// Diagonal matrix. Fails unless every entry has modulus 1.
    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        let dim = diag.len();
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = d;
        }
        Self::from_rows(dim, entries)
    }

    fn raw(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::ONE;
        }
        Self::raw(dim, entries)
    }

    pub fn h() -> Self {
        let s = FRAC_1_SQRT_2;
        Self::raw(2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
    }

    pub fn x() -> Self {
        Self::raw(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn y() -> Self {
        Self::raw(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub fn z() -> Self {
        Self::raw(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }

    /// `Rz(phi) = diag(e^{-i phi/2}, e^{i phi/2})`.
    pub fn rz(phi: f64) -> Result<Self> {
        finite(&[phi])?;
        let h = phi / 2.0;
        Ok(Self::raw(
            2,
            vec![Complex64::from_polar(1.0, -h), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, h)],
        ))
    }

    pub fn ry(theta: f64) -> Result<Self> {
        finite(&[theta])?;
        let (s, co) = (theta / 2.0).sin_cos();
        Ok(Self::raw(2, vec![c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]))
    }

    pub fn rx(theta: f64) -> Result<Self> {
        finite(&[theta])?;
        let (s, co) = (theta / 2.0).sin_cos();
        Ok(Self::raw(2, vec![c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]))
    }

    /// General single-qubit rotation
    /// `U(theta, phi, lambda) = [[cos(t/2), -e^{i lambda} sin(t/2)],
    ///                           [e^{i phi} sin(t/2), e^{i(phi+lambda)} cos(t/2)]]`.
    pub fn u(theta: f64, phi: f64, lambda: f64) -> Result<Self> {
        finite(&[theta, phi, lambda])?;
        let (s, co) = (theta / 2.0).sin_cos();
        Ok(Self::raw(
            2,
            vec![
                c(co, 0.0),
                -Complex64::from_polar(s, lambda),
                Complex64::from_polar(s, phi),
                Complex64::from_polar(co, phi + lambda),
            ],
        ))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits the matrix acts on.
    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = vec![Complex64::ZERO; n * n];
        for r in 0..n {
            for col in 0..n {
                out[col * n + r] = self.entries[r * n + col].conj();
            }
        }
        Self::raw(n, out)
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &GateMatrix) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![Complex64::ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for col in 0..n {
                    out[r * n + col] += a * rhs.entries[k * n + col];
                }
            }
        }
        Ok(Self::raw(n, out))
    }

    /// Kronecker product `self ⊗ rhs`. Under the little-endian basis
    /// convention `rhs` acts on the low-order qubits.
    pub fn tensor(&self, rhs: &GateMatrix) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        let n = a * b;
        let mut out = vec![Complex64::ZERO; n * n];
        for ar in 0..a {
            for ac in 0..a {
                let x = self.entries[ar * a + ac];
                for br in 0..b {
                    for bc in 0..b {
                        out[(ar * b + br) * n + ac * b + bc] = x * rhs.entries[br * b + bc];
                    }
                }
            }
        }
        Self::raw(n, out)
    }

    /// `self^{⊗ n}`; `n = 0` gives the 1×1 identity.
    pub fn tensor_power(&self, n: usize) -> Self {
        (0..n).fold(Self::identity(1), |acc, _| acc.tensor(self))
    }

    /// `max |(G^dagger G - I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += self.entries[k * n + i].conj() * self.entries[k * n + j];
                }
                if i == j {
                    acc -= Complex64::ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// Largest entrywise distance to `other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &GateMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Equality up to a global phase `e^{i gamma}`.
    pub fn approx_eq_up_to_phase(&self, other: &GateMatrix, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        // Pick the phase from the largest entry of `other`.
        let (idx, pivot) = other
            .entries
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("matrix is non-empty");
        if pivot.norm() < tol || self.entries[idx].norm() < tol {
            return false;
        }
        let phase = self.entries[idx] / pivot;
        let phase = phase / phase.norm();
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| (a - phase * b).norm() <= tol)
    }
}

impl fmt::Debug for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GateMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let row: Vec<String> = self
                .row(r)
                .iter()
                .map(|z| format!("{:+.4}{:+.4}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
