use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// How accidentals are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spelling {
    /// `C#`, `Db`
    #[default]
    Ascii,
    /// `C♯`, `D♭`
    Unicode,
}

/// A spelled pitch class: letter plus accidentals. `C♯` and `D♭` are
/// different names for the same pitch class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PitchName {
    letter: char,
    alter: i8,
}

fn letter_semitone(letter: char) -> Option<i32> {
    Some(match letter {
        'C' => 0,
        'D' => 2,
        'E' => 4,
        'F' => 5,
        'G' => 7,
        'A' => 9,
        'B' => 11,
        _ => return None,
    })
}

impl PitchName {
    pub fn new(letter: char, alter: i8) -> Result<Self> {
        let letter = letter.to_ascii_uppercase();
        if letter_semitone(letter).is_none() || !(-2..=2).contains(&alter) {
            return Err(Error::InvalidPitch(format!("{letter}{alter:+}")));
        }
        Ok(Self { letter, alter })
    }

    pub fn letter(&self) -> char {
        self.letter
    }

    pub fn alter(&self) -> i8 {
        self.alter
    }

    /// Semitone offset from C, before wrapping (`B#` gives 12, `Cb` gives -1).
    pub fn semitone_offset(&self) -> i32 {
        letter_semitone(self.letter).expect("validated letter") + self.alter as i32
    }

    /// Pitch class in `0..12`, C = 0.
    pub fn pitch_class(&self) -> u8 {
        self.semitone_offset().rem_euclid(12) as u8
    }

    pub fn spelled(&self, spelling: Spelling) -> String {
        let (sharp, flat) = match spelling {
            Spelling::Ascii => ("#", "b"),
            Spelling::Unicode => ("♯", "♭"),
        };
        let acc = if self.alter >= 0 { sharp } else { flat };
        format!("{}{}", self.letter, acc.repeat(self.alter.unsigned_abs() as usize))
    }

    /// Parses a leading pitch name and returns it with the unparsed rest.
    fn parse_prefix(s: &str) -> Result<(Self, &str)> {
        let mut chars = s.char_indices();
        let (_, first) = chars.next().ok_or_else(|| Error::InvalidPitch(s.to_string()))?;
        let letter = first.to_ascii_uppercase();
        if letter_semitone(letter).is_none() {
            return Err(Error::InvalidPitch(s.to_string()));
        }
        let mut alter: i8 = 0;
        let mut rest = &s[first.len_utf8()..];
        for (i, ch) in chars {
            match ch {
                '#' | '♯' => alter += 1,
                'b' | '♭' => alter -= 1,
                _ => {
                    rest = &s[i..];
                    break;
                }
            }
            rest = &s[i + ch.len_utf8()..];
            if alter.abs() > 2 {
                return Err(Error::InvalidPitch(s.to_string()));
            }
        }
        Ok((Self::new(letter, alter)?, rest))
    }
}

impl FromStr for PitchName {
    type Err = Error;

    /// Accepts `C`, `C#`, `C♯`, `Db`, `D♭`, double accidentals.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = Self::parse_prefix(s.trim())?;
        if !rest.is_empty() {
            return Err(Error::InvalidPitch(s.to_string()));
        }
        Ok(name)
    }
}

impl fmt::Display for PitchName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spelled(Spelling::Unicode))
    }
}

/// A spelled pitch in scientific notation; `C4` is MIDI note 60.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pitch {
    name: PitchName,
    octave: i32,
}

impl Pitch {
    pub fn new(name: PitchName, octave: i32) -> Result<Self> {
        let p = Self { name, octave };
        p.check_range()?;
        Ok(p)
    }

    fn check_range(&self) -> Result<()> {
        let m = self.midi_number_unchecked();
        if (0..=127).contains(&m) {
            Ok(())
        } else {
            Err(Error::PitchOutOfRange(m))
        }
    }

    fn midi_number_unchecked(&self) -> i32 {
        12 * (self.octave + 1) + self.name.semitone_offset()
    }

    pub fn name(&self) -> PitchName {
        self.name
    }

    pub fn octave(&self) -> i32 {
        self.octave
    }

    pub fn pitch_class(&self) -> u8 {
        self.name.pitch_class()
    }

    /// `12 * (octave + 1) + semitone offset of the name`.
    pub fn midi_number(&self) -> u8 {
        self.midi_number_unchecked() as u8
    }

    pub fn spelled(&self, spelling: Spelling) -> String {
        format!("{}{}", self.name.spelled(spelling), self.octave)
    }
}

impl FromStr for Pitch {
    type Err = Error;

    /// Accepts e.g. `C4`, `Db4`, `G♭4`, `A#-1`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (name, rest) = PitchName::parse_prefix(t)?;
        let octave: i32 = rest.parse().map_err(|_| Error::InvalidPitch(s.to_string()))?;
        Pitch::new(name, octave).map_err(|e| match e {
            Error::PitchOutOfRange(_) => e,
            _ => Error::InvalidPitch(s.to_string()),
        })
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spelled(Spelling::Ascii))
    }
}

impl Serialize for Pitch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.spelled(Spelling::Ascii))
    }
}

impl<'de> Deserialize<'de> for Pitch {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
