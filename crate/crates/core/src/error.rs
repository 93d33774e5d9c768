use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // simulator
    #[error("basis index {index} is out of range for a {n_qubits}-qubit register")]
    BasisIndexOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit index {index} is out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit {0} appears more than once in a single operation")]
    OverlappingQubits(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not unitary (max |G^dagger G - I| = {0:e})")]
    NonUnitary(f64),
    #[error("state is not normalized (|norm^2 - 1| = {0:e})")]
    NotNormalized(f64),
    #[error("gate parameters must be finite")]
    NonFiniteParameter,
    #[error("amplitudes must be finite")]
    NonFiniteAmplitude,
    #[error("register of {0} qubits is outside the supported range")]
    UnsupportedQubitCount(usize),
    #[error("circuit has no measured qubits")]
    EmptyMeasurement,
    #[error("shot count must be at least 1")]
    ZeroShots,

    // rules and alphabets
    #[error("unknown note name {name:?}; expected one of: {alphabet}")]
    UnknownNote { name: String, alphabet: String },
    #[error("invalid note alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("rule for {0} has no successors")]
    EmptyRule(String),
    #[error("no rule defined for {0}")]
    MissingRule(String),
    #[error("more than one rule defined for {0}")]
    DuplicateRule(String),
    #[error("note index {index} is outside an alphabet of {size} notes")]
    NoteOutOfRange { index: usize, size: usize },
    #[error("transition row for index {0} has no non-zero entries")]
    ZeroRow(usize),
    #[error("a walk needs at least 2 positions, got {0}")]
    WalkTooShort(usize),

    // interference selector
    #[error("target row has no targets")]
    NoTargets,
    #[error("{targets} targets do not fit a {n_qubits}-qubit register")]
    TooManyTargets { targets: usize, n_qubits: usize },

    // music
    #[error("invalid cube vertex {0:?}; expected a 3-bit code such as \"010\"")]
    InvalidVertex(String),
    #[error("invalid pitch {0:?}")]
    InvalidPitch(String),
    #[error("MIDI note number {0} is outside 0..=127")]
    PitchOutOfRange(i32),
    #[error("invalid duration {0}; durations must be positive and finite")]
    InvalidDuration(f64),
    #[error("score is empty")]
    EmptyScore,
    #[error("tempo must be positive and finite, got {0}")]
    InvalidTempo(f64),
    #[error("invalid dictionary: {0}")]
    InvalidDictionary(String),
    #[error("invalid rule file: {0}")]
    InvalidRuleFile(String),
}
