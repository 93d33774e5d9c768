//! Grover-amplified note selection.
//!
//! Each cycle takes the rule for the current note, marks its allowed
//! successors in a diagonal ±1 oracle, amplifies them with the diffuser
//! `H⊗ⁿ S H⊗ⁿ`, samples the register and keeps the majority outcome.
//! Twelve notes need four qubits; basis states 12–15 are padding and are
//! never marked.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::markov::{RuleSet, TargetMatrix};
use crate::qsim::{run_with, Circuit, CircuitOp, Execution, GateMatrix, Histogram, StateVector};
use crate::seed::RandomSeed;

pub const DEFAULT_SHOTS: u64 = 40;
/// Register width for a twelve-note alphabet.
pub const NOTE_QUBITS: usize = 4;

/// Diagonal ±1 oracle marking target basis states with −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleMatrix {
    n_qubits: usize,
    diagonal: Vec<i8>,
}

impl OracleMatrix {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn diagonal(&self) -> &[i8] {
        &self.diagonal
    }

    pub fn targets(&self) -> Vec<usize> {
        (0..self.diagonal.len()).filter(|&i| self.diagonal[i] < 0).collect()
    }

    pub fn is_target(&self, index: usize) -> bool {
        self.diagonal.get(index).is_some_and(|&d| d < 0)
    }

    pub fn to_gate(&self) -> GateMatrix {
        let diag: Vec<Complex64> = self.diagonal.iter().map(|&d| Complex64::new(d as f64, 0.0)).collect();
        GateMatrix::diagonal(&diag).expect("±1 diagonal is unitary")
    }
}

/// Oracle for a binary target row; entries past the row (padding) stay +1.
pub fn build_oracle(target_row: &[u8], n_qubits: usize) -> Result<OracleMatrix> {
    let dim = 1usize << n_qubits;
    if target_row.len() > dim {
        return Err(Error::TooManyTargets { targets: target_row.len(), n_qubits });
    }
    let mut diagonal = vec![1i8; dim];
    for (i, &b) in target_row.iter().enumerate() {
        if b != 0 {
            diagonal[i] = -1;
        }
    }
    if diagonal.iter().all(|&d| d > 0) {
        return Err(Error::NoTargets);
    }
    Ok(OracleMatrix { n_qubits, diagonal })
}

/// `diag(1, −1, …, −1)` of dimension `2ⁿ`.
pub fn shift_operator(n_qubits: usize) -> GateMatrix {
    let dim = 1usize << n_qubits;
    let diag: Vec<Complex64> = (0..dim)
        .map(|i| Complex64::new(if i == 0 { 1.0 } else { -1.0 }, 0.0))
        .collect();
    GateMatrix::diagonal(&diag).expect("±1 diagonal is unitary")
}

/// The amplitude-remixing operator `U_φ = H⊗ⁿ S H⊗ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diffuser {
    pub n_qubits: usize,
    pub matrix: GateMatrix,
}

pub fn diffuser(n_qubits: usize) -> Diffuser {
    let hn = GateMatrix::h().tensor_power(n_qubits);
    let matrix = hn
        .matmul(&shift_operator(n_qubits))
        .and_then(|m| m.matmul(&hn))
        .expect("matching dimensions");
    Diffuser { n_qubits, matrix }
}

/// `max(1, ⌊0.7854·√(2ⁿ/T)⌋)`.
pub fn grover_iterations(n_qubits: usize, n_targets: usize) -> Result<usize> {
    let dim = 1usize << n_qubits;
    if n_targets == 0 {
        return Err(Error::NoTargets);
    }
    if n_targets > dim {
        return Err(Error::TooManyTargets { targets: n_targets, n_qubits });
    }
    // The rounded constant is part of the formula; π/4 would shift edge cases.
    #[allow(clippy::approx_constant)]
    let i = (0.7854 * (dim as f64 / n_targets as f64).sqrt()).floor() as usize;
    Ok(i.max(1))
}

/// Closed-form total target probability `sin²((2i+1)·asin(√(T/2ⁿ)))`.
pub fn target_probability(n_qubits: usize, n_targets: usize, iterations: usize) -> f64 {
    let theta = (n_targets as f64 / (1u64 << n_qubits) as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverConfig {
    pub shots: u64,
    pub seed: RandomSeed,
    pub iteration_override: Option<usize>,
    pub execution: Execution,
}

impl Default for GroverConfig {
    fn default() -> Self {
        Self {
            shots: DEFAULT_SHOTS,
            seed: RandomSeed::default(),
            iteration_override: None,
            execution: Execution::Sequential,
        }
    }
}

impl GroverConfig {
    pub fn new(shots: u64, seed: RandomSeed) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { shots, seed, ..Self::default() })
    }

    fn with_seed(self, seed: RandomSeed) -> Self {
        Self { seed, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionResult {
    pub winner: usize,
    pub histogram: Histogram,
    pub iterations_used: usize,
    /// Set when neither the first run nor its retry produced an in-target
    /// majority and the winner was picked from the in-target outcomes.
    pub recovered: bool,
}

/// Uniform superposition followed by `iterations` rounds of oracle then
/// diffuser, all qubits measured.
pub fn grover_circuit(oracle: &OracleMatrix, iterations: usize) -> Result<Circuit> {
    let n = oracle.n_qubits;
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.h(q)?;
    }
    let o = oracle.to_gate();
    let d = diffuser(n).matrix;
    for _ in 0..iterations {
        c.push(CircuitOp::full(o.clone()))?;
        c.push(CircuitOp::full(d.clone()))?;
    }
    c.measure_all();
    Ok(c)
}

fn iterations_for(oracle: &OracleMatrix, config: &GroverConfig) -> Result<usize> {
    match config.iteration_override {
        Some(i) => Ok(i),
        None => grover_iterations(oracle.n_qubits, oracle.targets().len()),
    }
}

pub fn grover_run(oracle: &OracleMatrix, config: &GroverConfig) -> Result<SelectionResult> {
    let iterations = iterations_for(oracle, config)?;
    let circuit = grover_circuit(oracle, iterations)?;
    let histogram = run_with(&circuit, config.shots, config.seed, config.execution)?;
    let winner = histogram.most_frequent().ok_or(Error::ZeroShots)?;
    Ok(SelectionResult { winner, histogram, iterations_used: iterations, recovered: false })
}

/// One selection cycle from `current`. A non-target majority triggers one
/// retry on `seed.stream(1)`; if that also misses, the most frequent
/// in-target outcome of the retry wins and the result is flagged.
pub fn select_next(rules: &RuleSet, current: usize, config: &GroverConfig) -> Result<SelectionResult> {
    let targets = TargetMatrix::from_rules(rules);
    let oracle = build_oracle(targets.row_for(current)?, NOTE_QUBITS)?;
    let first = grover_run(&oracle, config)?;
    if oracle.is_target(first.winner) {
        return Ok(first);
    }
    let retry = grover_run(&oracle, &config.with_seed(config.seed.stream(1)))?;
    if oracle.is_target(retry.winner) {
        return Ok(retry);
    }
    let winner = retry
        .histogram
        .most_frequent_among(|k| oracle.is_target(k))
        .or_else(|| first.histogram.most_frequent_among(|k| oracle.is_target(k)))
        .unwrap_or_else(|| oracle.targets()[0]);
    Ok(SelectionResult { winner, recovered: true, ..retry })
}

/// One generation cycle: the note it started from and the selection made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub current: usize,
    pub result: SelectionResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    /// `length + 1` notes, starting with the start note.
    pub notes: Vec<usize>,
    pub cycles: Vec<Cycle>,
}

/// Chains `length` selection cycles from `start`. Cycle `c` (from 0) runs on
/// `config.seed.stream(c)`.
pub fn generate(rules: &RuleSet, start: usize, length: usize, config: &GroverConfig) -> Result<Generation> {
    let size = rules.alphabet().len();
    if start >= size {
        return Err(Error::NoteOutOfRange { index: start, size });
    }
    let mut notes = Vec::with_capacity(length + 1);
    let mut cycles = Vec::with_capacity(length);
    notes.push(start);
    let mut current = start;
    for c in 0..length {
        let result = select_next(rules, current, &config.with_seed(config.seed.stream(c as u64)))?;
        let next = result.winner;
        cycles.push(Cycle { current, result });
        notes.push(next);
        current = next;
    }
    Ok(Generation { notes, cycles })
}

fn state_label(index: usize, n_qubits: usize) -> String {
    format!("{index:0n_qubits$b}")
}

impl Cycle {
    /// Histogram with 4-bit labels (most significant qubit first) and
    /// percentages of the shot count.
    pub fn to_json(&self, index: usize, names: &impl Fn(usize) -> String) -> Value {
        let h = &self.result.histogram;
        let bars: Vec<Value> = h
            .iter()
            .map(|(k, count)| {
                json!({
                    "state": state_label(k, h.n_bits()),
                    "index": k,
                    "count": count,
                    "percent": 100.0 * count as f64 / h.shots() as f64,
                })
            })
            .collect();
        json!({
            "cycle": index + 1,
            "current": names(self.current),
            "winner": state_label(self.result.winner, h.n_bits()),
            "winner_note": names(self.result.winner),
            "iterations": self.result.iterations_used,
            "recovered": self.result.recovered,
            "histogram": bars,
        })
    }
}

impl Generation {
    pub fn to_json(&self, shots: u64, seed: RandomSeed, names: impl Fn(usize) -> String) -> Value {
        json!({
            "shots": shots,
            "seed": seed.value(),
            "notes": self.notes.iter().map(|&n| names(n)).collect::<Vec<_>>(),
            "cycles": self.cycles.iter().enumerate().map(|(i, c)| c.to_json(i, &names)).collect::<Vec<_>>(),
        })
    }

    /// One row per observed outcome per cycle.
    pub fn to_csv(&self, names: impl Fn(usize) -> String) -> String {
        let mut out = String::from("cycle,current,state,count,percent,winner\n");
        for (i, c) in self.cycles.iter().enumerate() {
            let h = &c.result.histogram;
            for (k, count) in h.iter() {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    i + 1,
                    names(c.current),
                    state_label(k, h.n_bits()),
                    count,
                    100.0 * count as f64 / h.shots() as f64,
                    (k == c.result.winner) as u8,
                ));
            }
        }
        out
    }
}

/// Statevectors of one amplification round, with `δ` (squared modulus of
/// the mean amplitude) at the first two stages.
#[derive(Debug, Clone, PartialEq)]
pub struct RemixTrace {
    /// After `H⊗ⁿ` on `|0…0⟩`.
    pub balanced: StateVector,
    pub after_oracle: StateVector,
    /// After the first `H⊗ⁿ` of the diffuser.
    pub after_hadamard: StateVector,
    pub after_shift: StateVector,
    /// After the closing `H⊗ⁿ`.
    pub remixed: StateVector,
    pub delta_balanced: f64,
    pub delta_after_oracle: f64,
}

pub fn remix_trace(oracle: &OracleMatrix) -> Result<RemixTrace> {
    let n = oracle.n_qubits;
    let hn = GateMatrix::h().tensor_power(n);
    let step = |s: &StateVector, g: &GateMatrix| -> Result<StateVector> {
        let mut out = s.clone();
        out.apply_matrix(g)?;
        Ok(out)
    };
    let balanced = step(&StateVector::zero(n)?, &hn)?;
    let after_oracle = step(&balanced, &oracle.to_gate())?;
    let after_hadamard = step(&after_oracle, &hn)?;
    let after_shift = step(&after_hadamard, &shift_operator(n))?;
    let remixed = step(&after_shift, &hn)?;
    Ok(RemixTrace {
        delta_balanced: balanced.mean_squared_amplitude(),
        delta_after_oracle: after_oracle.mean_squared_amplitude(),
        balanced,
        after_oracle,
        after_hadamard,
        after_shift,
        remixed,
    })
}

/// Gate-level two-qubit round marking `|01⟩`: `Rz(π/2)` on `q0` around a
/// CZ forms the oracle, and `H X CZ X H` on both qubits the diffuser.
/// Starts from `H` on both qubits and measures both.
pub fn two_qubit_interference_circuit() -> Circuit {
    let mut c = Circuit::new(2).expect("2 qubits");
    let rz = GateMatrix::rz(std::f64::consts::FRAC_PI_2).expect("finite angle");
    c.h(0).and_then(|c| c.h(1)).expect("valid ops");
    push_interference_round(&mut c, &rz).expect("valid ops");
    c.measure_all();
    c
}

fn push_interference_round(c: &mut Circuit, rz: &GateMatrix) -> Result<()> {
    c.push(CircuitOp::single(rz.clone(), 0))?;
    c.push(CircuitOp::cz(0, 1))?;
    c.push(CircuitOp::single(rz.clone(), 0))?;
    for gate in [GateMatrix::h(), GateMatrix::x()] {
        c.push(CircuitOp::single(gate.clone(), 0))?;
        c.push(CircuitOp::single(gate, 1))?;
    }
    c.push(CircuitOp::cz(0, 1))?;
    for gate in [GateMatrix::x(), GateMatrix::h()] {
        c.push(CircuitOp::single(gate.clone(), 0))?;
        c.push(CircuitOp::single(gate, 1))?;
    }
    Ok(())
}

/// Unitary of the gate-level round alone, without state preparation.
pub fn two_qubit_round_unitary() -> GateMatrix {
    let mut c = Circuit::new(2).expect("2 qubits");
    let rz = GateMatrix::rz(std::f64::consts::FRAC_PI_2).expect("finite angle");
    push_interference_round(&mut c, &rz).expect("valid ops");
    c.unitary().expect("2-qubit circuit")
}
