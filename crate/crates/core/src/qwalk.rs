//! Quantum-walk note generators.
//!
//! Two walkers share the simulator:
//!
//! * a line walk over the note alphabet, stepping left or right on the roll of
//!   a one-qubit Hadamard die;
//! * a walk on the vertices of a cube, where two Hadamard "dice" qubits steer a
//!   cascade of controlled NOTs that flips one of the three vertex qubits or
//!   leaves the vertex unchanged. Each step is run for a number of shots and
//!   the most frequent vertex wins.
//!
//! Cube vertices are written as three binary digits `q0 q1 q2`, left to right.
//! Read as a binary number this is the vertex code, so code bit 2 is `q0`.
//! The measured register uses the simulator's little-endian order, which is
//! the same three digits reversed (`q2 q1 q0`).

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qsim::{run_with, Circuit, Execution, Histogram};
use crate::seed::RandomSeed;

pub const DEFAULT_SHOTS: u64 = 40;

/// Dice qubits of the cube circuit.
pub const DICE_QUBITS: [usize; 2] = [3, 4];
/// Vertex qubits `q0, q1, q2`.
pub const VERTEX_QUBITS: [usize; 3] = [0, 1, 2];

/// A vertex of the 3-cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeVertex(u8);

impl CubeVertex {
    pub fn new(code: u8) -> Result<Self> {
        if code < 8 {
            Ok(Self(code))
        } else {
            Err(Error::InvalidVertex(code.to_string()))
        }
    }

    pub fn from_qubits(q0: bool, q1: bool, q2: bool) -> Self {
        Self((q0 as u8) << 2 | (q1 as u8) << 1 | q2 as u8)
    }

    pub fn all() -> impl Iterator<Item = CubeVertex> {
        (0..8).map(CubeVertex)
    }

    pub fn code(self) -> u8 {
        self.0
    }

    /// Value of qubit `q_k`, `k` in `0..3`.
    pub fn qubit(self, k: usize) -> bool {
        assert!(k < 3, "cube vertices have three qubits");
        self.0 >> (2 - k) & 1 == 1
    }

    /// Index of this vertex in the little-endian `q0..q2` register.
    pub fn register_index(self) -> usize {
        (0..3).map(|k| (self.qubit(k) as usize) << k).sum()
    }

    pub fn from_register_index(index: usize) -> Result<Self> {
        if index >= 8 {
            return Err(Error::InvalidVertex(index.to_string()));
        }
        Ok(Self::from_qubits(index & 1 == 1, index & 2 == 2, index & 4 == 4))
    }

    /// `q0 q1 q2` digits, e.g. `"001"` for `q2 = 1`.
    pub fn label(self) -> String {
        format!("{:03b}", self.0)
    }

    /// Digits in register order `q2 q1 q0`, as quantum tooling prints them.
    pub fn register_label(self) -> String {
        format!("{:03b}", self.register_index())
    }

    /// The vertex with qubit `q_k` inverted.
    pub fn flip(self, k: usize) -> Self {
        assert!(k < 3, "cube vertices have three qubits");
        Self(self.0 ^ (1 << (2 - k)))
    }

    pub fn hamming(self, other: CubeVertex) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    /// The vertex itself and its three neighbours.
    pub fn reachable(self) -> [CubeVertex; 4] {
        [self, self.flip(0), self.flip(1), self.flip(2)]
    }
}

impl FromStr for CubeVertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.len() != 3 || !t.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidVertex(s.to_string()));
        }
        Ok(Self(u8::from_str_radix(t, 2).expect("checked binary digits")))
    }
}

impl fmt::Display for CubeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    pub steps: usize,
    pub shots: u64,
    pub seed: RandomSeed,
    pub execution: Execution,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            steps: 1,
            shots: DEFAULT_SHOTS,
            seed: RandomSeed::default(),
            execution: Execution::Sequential,
        }
    }
}

impl WalkConfig {
    pub fn new(steps: usize, shots: u64, seed: RandomSeed) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { steps, shots, seed, execution: Execution::Sequential })
    }
}

// ---------------------------------------------------------------------------
// Line walk

/// One qubit, one Hadamard, measured.
pub fn die_circuit() -> Circuit {
    let mut c = Circuit::new(1).expect("1 qubit");
    c.h(0).expect("valid op").measure_all();
    c
}

/// Single-shot roll of the Hadamard die.
pub fn quantum_die(seed: RandomSeed) -> u8 {
    let h = run_with(&die_circuit(), 1, seed, Execution::Sequential).expect("valid circuit");
    h.most_frequent().expect("one shot") as u8
}

/// Next position of the line walk: `die = 0` steps left, `1` steps right;
/// the two ends always step inward.
pub fn walk1d_step(current: usize, size: usize, die: u8) -> Result<usize> {
    if size < 2 {
        return Err(Error::WalkTooShort(size));
    }
    if current >= size {
        return Err(Error::NoteOutOfRange { index: current, size });
    }
    Ok(match current {
        0 => 1,
        c if c == size - 1 => c - 1,
        c if die == 0 => c - 1,
        c => c + 1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineWalk {
    /// `steps + 1` positions, starting with the start position.
    pub positions: Vec<usize>,
    /// Die rolled before each step.
    pub dice: Vec<u8>,
}

/// Runs `config.steps` die-driven steps from `start`. Step `k` (from 0) rolls
/// with seed `config.seed.stream(k)`.
pub fn walk1d_generate(start: usize, size: usize, config: &WalkConfig) -> Result<LineWalk> {
    if size < 2 {
        return Err(Error::WalkTooShort(size));
    }
    if start >= size {
        return Err(Error::NoteOutOfRange { index: start, size });
    }
    let mut positions = Vec::with_capacity(config.steps + 1);
    let mut dice = Vec::with_capacity(config.steps);
    positions.push(start);
    let mut current = start;
    for k in 0..config.steps {
        let die = quantum_die(config.seed.stream(k as u64));
        current = walk1d_step(current, size, die)?;
        dice.push(die);
        positions.push(current);
    }
    Ok(LineWalk { positions, dice })
}

impl LineWalk {
    /// `step,position,die` rows; step 0 has an empty die column.
    pub fn to_csv(&self, names: impl Fn(usize) -> String) -> String {
        let mut out = String::from("step,position,note,die\n");
        for (i, &p) in self.positions.iter().enumerate() {
            let die = if i == 0 { String::new() } else { self.dice[i - 1].to_string() };
            out.push_str(&format!("{i},{p},{},{die}\n", names(p)));
        }
        out
    }

    pub fn to_json(&self, names: impl Fn(usize) -> String) -> Value {
        let steps: Vec<Value> = self
            .positions
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let die = if i == 0 { Value::Null } else { json!(self.dice[i - 1]) };
                json!({ "step": i, "position": p, "note": names(p), "die": die })
            })
            .collect();
        json!({ "steps": steps })
    }
}

// ---------------------------------------------------------------------------
// Cube walk

/// The controlled-NOT cascade driven by dice qubits `q3`, `q4`:
///
/// | q3 | q4 | effect     |
/// |----|----|------------|
/// | 0  | 0  | flip `q1`  |
/// | 0  | 1  | flip `q0`  |
/// | 1  | 0  | no change  |
/// | 1  | 1  | flip `q2`  |
fn push_cascade(c: &mut Circuit) -> Result<()> {
    let [d3, d4] = DICE_QUBITS;
    c.cx(d4, 0)?;
    c.x(d4)?;
    c.cx(d4, 1)?;
    c.cx(d3, 2)?;
    c.ccx(d3, d4, 1)?;
    c.x(d4)?;
    c.ccx(d3, d4, 0)?;
    c.x(d4)?;
    c.ccx(d3, d4, 2)?;
    Ok(())
}

fn arm_vertex(c: &mut Circuit, start: CubeVertex) -> Result<()> {
    for k in VERTEX_QUBITS {
        if start.qubit(k) {
            c.x(k)?;
        }
    }
    Ok(())
}

/// Five-qubit walk circuit: vertex qubits armed to `start`, both dice in
/// balanced superposition, then the cascade. Only `q0..q2` are measured.
pub fn cube_circuit(start: CubeVertex) -> Circuit {
    let mut c = Circuit::new(5).expect("5 qubits");
    arm_vertex(&mut c, start).expect("valid ops");
    for d in DICE_QUBITS {
        c.h(d).expect("valid op");
    }
    push_cascade(&mut c).expect("valid ops");
    c.measure(&VERTEX_QUBITS).expect("valid qubits");
    c
}

/// The same circuit with the dice fixed to `(q3, q4)` instead of rolled.
pub fn cube_circuit_with_dice(start: CubeVertex, q3: bool, q4: bool) -> Circuit {
    let mut c = Circuit::new(5).expect("5 qubits");
    arm_vertex(&mut c, start).expect("valid ops");
    for (d, on) in DICE_QUBITS.into_iter().zip([q3, q4]) {
        if on {
            c.x(d).expect("valid op");
        }
    }
    push_cascade(&mut c).expect("valid ops");
    c.measure(&VERTEX_QUBITS).expect("valid qubits");
    c
}

/// Exact outcome distribution over vertex codes.
pub fn cube_distribution(start: CubeVertex) -> [f64; 8] {
    let probs = cube_circuit(start).outcome_probabilities().expect("measured circuit");
    let mut out = [0.0; 8];
    for (idx, p) in probs.into_iter().enumerate() {
        out[CubeVertex::from_register_index(idx).expect("3-bit index").code() as usize] = p;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeStep {
    pub winner: CubeVertex,
    /// Counts keyed by vertex code.
    pub histogram: Histogram,
}

/// Runs the walk circuit from `current` for `shots` shots and keeps the most
/// frequent vertex (ties to the smallest code).
pub fn cube_step(current: CubeVertex, shots: u64, seed: RandomSeed, exec: Execution) -> Result<CubeStep> {
    let raw = run_with(&cube_circuit(current), shots, seed, exec)?;
    let mut histogram = Histogram::new(3);
    for (idx, count) in raw.iter() {
        let code = CubeVertex::from_register_index(idx)?.code() as usize;
        for _ in 0..count {
            histogram.record(code);
        }
    }
    let winner = CubeVertex::new(histogram.most_frequent().expect("shots >= 1") as u8)?;
    Ok(CubeStep { winner, histogram })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub step: usize,
    pub pitch: CubeVertex,
    pub rhythm: CubeVertex,
    /// `None` for step 0, which is the armed start.
    pub pitch_histogram: Option<Histogram>,
    pub rhythm_histogram: Option<Histogram>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    pub shots: u64,
    pub seed: RandomSeed,
    pub records: Vec<StepRecord>,
}

/// Walks the pitch cube and the rhythm cube side by side for `config.steps`
/// steps. Each step's winners arm the next step. Step `s` (from 1) seeds the
/// pitch run with `seed.stream(2s - 2)` and the rhythm run with
/// `seed.stream(2s - 1)`.
pub fn cube_generate(start_pitch: CubeVertex, start_rhythm: CubeVertex, config: &WalkConfig) -> Result<WalkTrace> {
    if config.shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut records = Vec::with_capacity(config.steps + 1);
    records.push(StepRecord {
        step: 0,
        pitch: start_pitch,
        rhythm: start_rhythm,
        pitch_histogram: None,
        rhythm_histogram: None,
    });
    let (mut pitch, mut rhythm) = (start_pitch, start_rhythm);
    for s in 1..=config.steps {
        let base = 2 * (s as u64 - 1);
        let p = cube_step(pitch, config.shots, config.seed.stream(base), config.execution)?;
        let r = cube_step(rhythm, config.shots, config.seed.stream(base + 1), config.execution)?;
        pitch = p.winner;
        rhythm = r.winner;
        records.push(StepRecord {
            step: s,
            pitch,
            rhythm,
            pitch_histogram: Some(p.histogram),
            rhythm_histogram: Some(r.histogram),
        });
    }
    Ok(WalkTrace { shots: config.shots, seed: config.seed, records })
}

fn histogram_json(h: &Histogram) -> Value {
    Value::Array(
        h.iter()
            .map(|(code, count)| {
                let v = CubeVertex::new(code as u8).expect("3-bit code");
                json!({ "code": v.label(), "register": v.register_label(), "count": count })
            })
            .collect(),
    )
}

impl WalkTrace {
    /// Header `step,pitch_code,rhythm_code`, one row per step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,pitch_code,rhythm_code\n");
        for r in &self.records {
            out.push_str(&format!("{},{},{}\n", r.step, r.pitch, r.rhythm));
        }
        out
    }

    /// Trace with per-step histograms. Each histogram entry carries the
    /// vertex label (`q0 q1 q2`) and the reversed register label
    /// (`q2 q1 q0`) that plotting tools show.
    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .records
            .iter()
            .map(|r| {
                json!({
                    "step": r.step,
                    "pitch_code": r.pitch.label(),
                    "rhythm_code": r.rhythm.label(),
                    "pitch_histogram": r.pitch_histogram.as_ref().map(histogram_json),
                    "rhythm_histogram": r.rhythm_histogram.as_ref().map(histogram_json),
                })
            })
            .collect();
        json!({
            "shots": self.shots,
            "seed": self.seed.value(),
            "code_order": "q0q1q2",
            "register_order": "q2q1q0",
            "steps": steps,
        })
    }
}
