//! Twelve-tone sequencing rules and their matrix forms.
//!
//! A [`RuleSet`] lists, for every note of a [`NoteAlphabet`], which notes may
//! follow it. Rules are kept in a fixed row order (for the built-in set, the
//! inversion of the series), and both the binary [`TargetMatrix`] and the
//! row-stochastic [`TransitionMatrix`] use that order for their rows while
//! columns follow the alphabet.

use std::collections::BTreeSet;

use rand::RngCore;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::music::{PitchName, Spelling};
use crate::seed::unit_f64;

pub const ALPHABET_SIZE: usize = 12;

/// Ordered set of 12 distinct pitch classes. Index `i` is basis state `|i>`
/// of the 4-qubit selection register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteAlphabet {
    symbols: Vec<PitchName>,
}

const SERIES: [&str; ALPHABET_SIZE] = ["E", "F", "G", "C#", "F#", "D#", "G#", "D", "B", "C", "A", "A#"];

impl NoteAlphabet {
    pub fn new(symbols: Vec<PitchName>) -> Result<Self> {
        if symbols.len() != ALPHABET_SIZE {
            return Err(Error::InvalidAlphabet(format!(
                "expected {ALPHABET_SIZE} notes, got {}",
                symbols.len()
            )));
        }
        let classes: BTreeSet<u8> = symbols.iter().map(|s| s.pitch_class()).collect();
        if classes.len() != ALPHABET_SIZE {
            return Err(Error::InvalidAlphabet("pitch classes must be distinct".into()));
        }
        Ok(Self { symbols })
    }

    /// The series E F G C♯ F♯ D♯ G♯ D B C A A♯.
    pub fn twelve_tone() -> Self {
        Self {
            symbols: SERIES.iter().map(|s| s.parse().expect("valid name")).collect(),
        }
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let symbols = names
            .iter()
            .map(|n| n.as_ref().parse::<PitchName>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::InvalidAlphabet(e.to_string()))?;
        Self::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[PitchName] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> PitchName {
        self.symbols[index]
    }

    pub fn label(&self, index: usize, spelling: Spelling) -> String {
        self.symbols[index].spelled(spelling)
    }

    /// Index of the note with the same pitch class as `name` (enharmonic
    /// spellings match).
    pub fn index_of(&self, name: &str) -> Result<usize> {
        let unknown = || Error::UnknownNote {
            name: name.to_string(),
            alphabet: self.listing(),
        };
        let pc = name.parse::<PitchName>().map_err(|_| unknown())?.pitch_class();
        self.symbols.iter().position(|s| s.pitch_class() == pc).ok_or_else(unknown)
    }

    /// Comma-separated ASCII labels, used in error messages.
    pub fn listing(&self) -> String {
        self.symbols
            .iter()
            .map(|s| s.spelled(Spelling::Ascii))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Inversion about the first note: each interval of the series is
    /// mirrored. For the default series this is E D♯ C♯ G D F C F♯ A G♯ B A♯.
    pub fn inversion_order(&self) -> Vec<usize> {
        let first = self.symbols[0].pitch_class() as i32;
        (0..self.len())
            .map(|i| {
                let pc = (2 * first - self.symbols[i].pitch_class() as i32).rem_euclid(12) as u8;
                self.symbols
                    .iter()
                    .position(|s| s.pitch_class() == pc)
                    .expect("alphabet covers all 12 pitch classes")
            })
            .collect()
    }
}

impl Default for NoteAlphabet {
    fn default() -> Self {
        Self::twelve_tone()
    }
}

/// One row of a rule set: the note it applies to and its allowed successors
/// (ascending alphabet indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub note: usize,
    pub successors: Vec<usize>,
}

/// Allowed-successor table over an alphabet, one rule per note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    alphabet: NoteAlphabet,
    rules: Vec<Rule>,
}

// Built-in rule table, rows in the inverted-series order. Rows C and F#
// follow the target matrix the selector consumes: C -> {F, F#, B, C},
// F# -> {C#, D#, C, A#}.
const DEFAULT_RULES: [(&str, &[&str]); ALPHABET_SIZE] = [
    ("E", &["F", "D#"]),
    ("D#", &["E", "C#", "F#", "G#"]),
    ("C#", &["G", "F#", "D#"]),
    ("G", &["F", "C#", "D"]),
    ("D", &["F", "G", "G#", "B"]),
    ("F", &["E", "G", "D", "C"]),
    ("C", &["F", "F#", "B", "C"]),
    ("F#", &["C#", "D#", "C", "A#"]),
    ("A", &["F#", "G#", "C", "A#"]),
    ("G#", &["D#", "D", "B", "A"]),
    ("B", &["G#", "D", "C", "A#"]),
    ("A#", &["B", "A"]),
];

// The same table as written out rule by rule, where rows C and F# read
// C -> {F, F#, B, A} and F# -> {C#, D#, C, A}.
const LISTED_RULES_C: &[&str] = &["F", "F#", "B", "A"];
const LISTED_RULES_FS: &[&str] = &["C#", "D#", "C", "A"];

impl RuleSet {
    /// Builds a rule set. Every alphabet note needs exactly one non-empty rule;
    /// rows keep the order given.
    pub fn new(alphabet: NoteAlphabet, rules: Vec<Rule>) -> Result<Self> {
        let n = alphabet.len();
        let name = |i: usize| alphabet.label(i, Spelling::Ascii);
        let mut seen = vec![false; n];
        let mut clean = Vec::with_capacity(rules.len());
        for rule in rules {
            if rule.note >= n {
                return Err(Error::NoteOutOfRange { index: rule.note, size: n });
            }
            if seen[rule.note] {
                return Err(Error::DuplicateRule(name(rule.note)));
            }
            seen[rule.note] = true;
            if rule.successors.is_empty() {
                return Err(Error::EmptyRule(name(rule.note)));
            }
            if let Some(&bad) = rule.successors.iter().find(|&&s| s >= n) {
                return Err(Error::NoteOutOfRange { index: bad, size: n });
            }
            let successors: BTreeSet<usize> = rule.successors.into_iter().collect();
            clean.push(Rule {
                note: rule.note,
                successors: successors.into_iter().collect(),
            });
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::MissingRule(name(missing)));
        }
        Ok(Self { alphabet, rules: clean })
    }

    fn from_table(table: &[(&str, &[&str])]) -> Self {
        let alphabet = NoteAlphabet::twelve_tone();
        let rules = table
            .iter()
            .map(|(note, succ)| Rule {
                note: alphabet.index_of(note).expect("built-in name"),
                successors: succ.iter().map(|s| alphabet.index_of(s).expect("built-in name")).collect(),
            })
            .collect();
        Self::new(alphabet, rules).expect("built-in rule table is valid")
    }

    /// The built-in twelve-tone rule table.
    pub fn twelve_tone() -> Self {
        Self::from_table(&DEFAULT_RULES)
    }

    /// Variant of [`RuleSet::twelve_tone`] where C may be followed by
    /// F, F♯, B or A and F♯ by C♯, D♯, C or A. All other rows are identical.
    pub fn twelve_tone_listed() -> Self {
        let mut table = DEFAULT_RULES;
        table[6].1 = LISTED_RULES_C;
        table[7].1 = LISTED_RULES_FS;
        Self::from_table(&table)
    }

    pub fn alphabet(&self) -> &NoteAlphabet {
        &self.alphabet
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Row position of the rule that applies after `note`.
    pub fn rule_index(&self, note: usize) -> Result<usize> {
        self.rules
            .iter()
            .position(|r| r.note == note)
            .ok_or(Error::NoteOutOfRange { index: note, size: self.alphabet.len() })
    }

    pub fn successors(&self, note: usize) -> Result<&[usize]> {
        Ok(&self.rules[self.rule_index(note)?].successors)
    }

    pub fn allows(&self, from: usize, to: usize) -> bool {
        self.successors(from).map(|s| s.contains(&to)).unwrap_or(false)
    }

    /// Number of consecutive pairs in `notes` that break the rules.
    pub fn violations(&self, notes: &[usize]) -> usize {
        notes.windows(2).filter(|w| !self.allows(w[0], w[1])).count()
    }

    /// Parses the rule-file format:
    /// `{"alphabet": [12 names], "rules": {"E": ["F", "D#"], ...}}`.
    /// `alphabet` may be omitted (the default series is used). Row order is
    /// the key order of `rules`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::InvalidRuleFile(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidRuleFile("top level must be an object".into()))?;
        let alphabet = match obj.get("alphabet") {
            None => NoteAlphabet::twelve_tone(),
            Some(Value::Array(items)) => {
                let names = items
                    .iter()
                    .map(|v| v.as_str().map(str::to_owned))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::InvalidRuleFile("alphabet entries must be strings".into()))?;
                NoteAlphabet::from_names(&names)?
            }
            Some(_) => return Err(Error::InvalidRuleFile("alphabet must be an array".into())),
        };
        let rules_obj = obj
            .get("rules")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::InvalidRuleFile("missing \"rules\" object".into()))?;
        let mut rules = Vec::with_capacity(rules_obj.len());
        for (key, succ) in rules_obj {
            let note = alphabet.index_of(key)?;
            let list = succ
                .as_array()
                .ok_or_else(|| Error::InvalidRuleFile(format!("rule for {key} must be an array")))?;
            let successors = list
                .iter()
                .map(|v| {
                    v.as_str()
                        .ok_or_else(|| Error::InvalidRuleFile(format!("rule for {key} must list note names")))
                        .and_then(|s| alphabet.index_of(s))
                })
                .collect::<Result<Vec<_>>>()?;
            rules.push(Rule { note, successors });
        }
        Self::new(alphabet, rules)
    }

    pub fn to_json(&self) -> Value {
        let label = |i: usize| Value::String(self.alphabet.label(i, Spelling::Ascii));
        let mut rules = Map::new();
        for r in &self.rules {
            rules.insert(
                self.alphabet.label(r.note, Spelling::Ascii),
                Value::Array(r.successors.iter().map(|&s| label(s)).collect()),
            );
        }
        serde_json::json!({
            "alphabet": (0..self.alphabet.len()).map(label).collect::<Vec<_>>(),
            "rules": rules,
        })
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::twelve_tone()
    }
}

/// Binary allowed-successor matrix: row `r` is rule `r`, column `c` is
/// alphabet note `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetMatrix {
    row_notes: Vec<usize>,
    rows: Vec<Vec<u8>>,
}

impl TargetMatrix {
    pub fn from_rules(rules: &RuleSet) -> Self {
        let n = rules.alphabet().len();
        let mut row_notes = Vec::with_capacity(n);
        let mut rows = Vec::with_capacity(n);
        for rule in rules.rules() {
            let mut row = vec![0u8; n];
            for &s in &rule.successors {
                row[s] = 1;
            }
            row_notes.push(rule.note);
            rows.push(row);
        }
        Self { row_notes, rows }
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.rows[r]
    }

    /// Note whose rule is row `r`.
    pub fn row_note(&self, r: usize) -> usize {
        self.row_notes[r]
    }

    /// The row for the rule that applies after `note`.
    pub fn row_for(&self, note: usize) -> Result<&[u8]> {
        self.row_notes
            .iter()
            .position(|&n| n == note)
            .map(|r| self.rows[r].as_slice())
            .ok_or(Error::NoteOutOfRange { index: note, size: self.rows.len() })
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.rows[r][c]
    }
}

/// Row-stochastic first-order transition matrix. Rows carry the index of the
/// state they belong to; columns are state indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    row_states: Vec<usize>,
    rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    /// Equal weight over each rule's successors.
    pub fn from_rules(rules: &RuleSet) -> Self {
        let n = rules.alphabet().len();
        let (row_states, rows) = rules
            .rules()
            .iter()
            .map(|rule| {
                let w = 1.0 / rule.successors.len() as f64;
                let mut row = vec![0.0; n];
                for &s in &rule.successors {
                    row[s] = w;
                }
                (rule.note, row)
            })
            .unzip();
        Self { row_states, rows }
    }

    /// Simple walk on a line of `n` positions: interior rows split evenly
    /// between the two neighbours; the end rows are forced inward.
    pub fn walk1d(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::WalkTooShort(n));
        }
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                if i == 0 {
                    row[1] = 1.0;
                } else if i == n - 1 {
                    row[n - 2] = 1.0;
                } else {
                    row[i - 1] = 0.5;
                    row[i + 1] = 0.5;
                }
                row
            })
            .collect();
        Ok(Self { row_states: (0..n).collect(), rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row_state(&self, r: usize) -> usize {
        self.row_states[r]
    }

    pub fn row_for(&self, state: usize) -> Result<&[f64]> {
        self.row_states
            .iter()
            .position(|&s| s == state)
            .map(|r| self.rows[r].as_slice())
            .ok_or(Error::NoteOutOfRange { index: state, size: self.rows.len() })
    }

    /// Draws the successor of `current` from its row.
    ///
    /// Uses one 64-bit word from `rng`; zero-probability columns are never
    /// returned.
    pub fn sample<R: RngCore + ?Sized>(&self, current: usize, rng: &mut R) -> Result<usize> {
        let row = self.row_for(current)?;
        let total: f64 = row.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroRow(current));
        }
        let u = unit_f64(rng.next_u64()) * total;
        let mut acc = 0.0;
        let mut last = None;
        for (c, &p) in row.iter().enumerate().filter(|(_, &p)| p > 0.0) {
            acc += p;
            last = Some(c);
            if u < acc {
                return Ok(c);
            }
        }
        Ok(last.expect("row has positive mass"))
    }
}
