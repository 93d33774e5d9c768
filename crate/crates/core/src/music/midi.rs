//! Standard MIDI File writer (format 0, single track).

use super::score::Score;
use crate::error::{Error, Result};

pub const TICKS_PER_QUARTER: u16 = 480;
pub const NOTE_ON_VELOCITY: u8 = 96;
pub const NOTE_OFF_VELOCITY: u8 = 64;
pub const CHANNEL: u8 = 0;

fn write_var_len(buf: &mut Vec<u8>, value: u32) {
    let mut stack = [0u8; 5];
    let mut n = 0;
    let mut v = value;
    loop {
        stack[n] = (v & 0x7f) as u8;
        n += 1;
        v >>= 7;
        if v == 0 {
            break;
        }
    }
    for i in (0..n).rev() {
        let cont = if i > 0 { 0x80 } else { 0 };
        buf.push(stack[i] | cont);
    }
}

/// Ticks for a note of `beats` quarter notes, rounded to the nearest tick.
pub fn beats_to_ticks(beats: f64) -> Result<u32> {
    let ticks = (beats * TICKS_PER_QUARTER as f64).round();
    if !(beats.is_finite() && ticks >= 1.0 && ticks <= 0x0fff_ffff as f64) {
        return Err(Error::InvalidDuration(beats));
    }
    Ok(ticks as u32)
}

/// Encodes `score` as an SMF format-0 byte stream.
///
/// Layout: `MThd` (format 0, 1 track, 480 TPQN), then one `MTrk` holding a
/// tempo meta event followed by a note-on/note-off pair per note on channel 0
/// (note-on velocity 96, note-off velocity 64), and end-of-track.
pub fn write_midi(score: &Score) -> Result<Vec<u8>> {
    if score.notes.is_empty() {
        return Err(Error::EmptyScore);
    }
    if !(score.tempo_bpm.is_finite() && score.tempo_bpm > 0.0) {
        return Err(Error::InvalidTempo(score.tempo_bpm));
    }
    let usec_per_quarter = (60_000_000.0 / score.tempo_bpm).round();
    if !(1.0..=16_777_215.0).contains(&usec_per_quarter) {
        return Err(Error::InvalidTempo(score.tempo_bpm));
    }
    let usec_per_quarter = usec_per_quarter as u32;

    let mut track = Vec::with_capacity(16 + score.notes.len() * 9);
    track.push(0x00);
    track.extend_from_slice(&[0xff, 0x51, 0x03]);
    track.extend_from_slice(&usec_per_quarter.to_be_bytes()[1..]);

    for note in &score.notes {
        let key = note.pitch.midi_number();
        let ticks = beats_to_ticks(note.beats)?;
        track.push(0x00);
        track.extend_from_slice(&[0x90 | CHANNEL, key, NOTE_ON_VELOCITY]);
        write_var_len(&mut track, ticks);
        track.extend_from_slice(&[0x80 | CHANNEL, key, NOTE_OFF_VELOCITY]);
    }
    track.extend_from_slice(&[0x00, 0xff, 0x2f, 0x00]);

    let mut out = Vec::with_capacity(22 + track.len());
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&0u16.to_be_bytes());
    out.extend_from_slice(&1u16.to_be_bytes());
    out.extend_from_slice(&TICKS_PER_QUARTER.to_be_bytes());
    out.extend_from_slice(b"MTrk");
    out.extend_from_slice(&(track.len() as u32).to_be_bytes());
    out.extend_from_slice(&track);
    Ok(out)
}
