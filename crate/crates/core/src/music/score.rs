use super::dictionary::MusicDictionary;
use super::pitch::{Pitch, Spelling};
use crate::error::{Error, Result};
use crate::markov::NoteAlphabet;
use crate::qwalk::WalkTrace;

pub const DEFAULT_TEMPO_BPM: f64 = 120.0;
/// Octave used when a pitch class has to be placed on the staff.
pub const DEFAULT_OCTAVE: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreNote {
    pub pitch: Pitch,
    pub beats: f64,
}

/// A monophonic note list.
#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    pub notes: Vec<ScoreNote>,
    pub tempo_bpm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStatus {
    Ok,
    /// Nothing to render; the text is empty.
    EmptyScore,
}

impl Score {
    pub fn new(tempo_bpm: f64) -> Result<Self> {
        if !(tempo_bpm.is_finite() && tempo_bpm > 0.0) {
            return Err(Error::InvalidTempo(tempo_bpm));
        }
        Ok(Self { notes: Vec::new(), tempo_bpm })
    }

    pub fn push(&mut self, pitch: Pitch, beats: f64) -> Result<()> {
        if !(beats.is_finite() && beats > 0.0) {
            return Err(Error::InvalidDuration(beats));
        }
        self.notes.push(ScoreNote { pitch, beats });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.notes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.notes.is_empty()
    }

    /// Alphabet indices rendered at `octave` with one duration for every note.
    pub fn from_alphabet(
        alphabet: &NoteAlphabet,
        notes: &[usize],
        octave: i32,
        beats: f64,
        tempo_bpm: f64,
    ) -> Result<Self> {
        let mut score = Self::new(tempo_bpm)?;
        for &n in notes {
            if n >= alphabet.len() {
                return Err(Error::NoteOutOfRange { index: n, size: alphabet.len() });
            }
            score.push(Pitch::new(alphabet.symbol(n), octave)?, beats)?;
        }
        Ok(score)
    }

    /// One note per trace record: pitch from the pitch code, length from the
    /// rhythm code.
    pub fn from_trace(trace: &WalkTrace, dict: &MusicDictionary, tempo_bpm: f64) -> Result<Self> {
        let mut score = Self::new(tempo_bpm)?;
        for rec in &trace.records {
            score.push(dict.pitch_of(rec.pitch), dict.rhythm_of(rec.rhythm).beats())?;
        }
        Ok(score)
    }

    /// One line per note: `<name><octave> <beats>`.
    pub fn render_text(&self, spelling: Spelling) -> (String, RenderStatus) {
        if self.notes.is_empty() {
            return (String::new(), RenderStatus::EmptyScore);
        }
        let mut out = String::new();
        for n in &self.notes {
            out.push_str(&format!("{} {}\n", n.pitch.spelled(spelling), n.beats));
        }
        (out, RenderStatus::Ok)
    }
}
