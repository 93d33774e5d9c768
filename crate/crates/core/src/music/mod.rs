//! Musical dictionaries, scores, and their text and MIDI encodings.

mod dictionary;
mod midi;
mod pitch;
mod score;

pub use dictionary::{default_rhythms, persian_scale, MusicDictionary, RhythmFigure};
pub use midi::{beats_to_ticks, write_midi, CHANNEL, NOTE_OFF_VELOCITY, NOTE_ON_VELOCITY, TICKS_PER_QUARTER};
pub use pitch::{Pitch, PitchName, Spelling};
pub use score::{RenderStatus, Score, ScoreNote, DEFAULT_OCTAVE, DEFAULT_TEMPO_BPM};
