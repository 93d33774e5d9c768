//! Dense statevector simulator.
//!
//! Qubit `q_k` is bit `k` of the basis index (little-endian), so the ket
//! `|q_{n-1} ... q_1 q_0>` read as a binary number is its index. Circuits are
//! always read out at the end; sampling draws shots from the exact final
//! distribution instead of propagating collapsed states.

mod circuit;
mod gate;
mod sampling;
mod state;

pub use circuit::{Circuit, CircuitOp};
pub use gate::{GateMatrix, UNITARY_TOLERANCE};
pub use sampling::{run, run_with, sample_distribution, Execution, Histogram};
pub use state::{StateVector, MAX_FULL_MATRIX_QUBITS};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 10;
