use serde_json::{Map, Value};

use super::pitch::Pitch;
use crate::error::{Error, Result};
use crate::qwalk::CubeVertex;

/// A note length in beats (quarter note = 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RhythmFigure(f64);

impl RhythmFigure {
    pub const SEMIBREVE: Self = Self(4.0);
    pub const DOTTED_MINIM: Self = Self(3.0);
    pub const MINIM: Self = Self(2.0);
    pub const DOTTED_CROCHET: Self = Self(1.5);
    pub const CROCHET: Self = Self(1.0);
    pub const DOTTED_QUAVER: Self = Self(0.75);
    pub const QUAVER: Self = Self(0.5);
    pub const SEMIQUAVER: Self = Self(0.25);

    pub fn new(beats: f64) -> Result<Self> {
        if beats.is_finite() && beats > 0.0 {
            Ok(Self(beats))
        } else {
            Err(Error::InvalidDuration(beats))
        }
    }

    pub fn beats(self) -> f64 {
        self.0
    }
}

/// Pitch and rhythm values for the eight cube vertices, indexed by code.
#[derive(Debug, Clone, PartialEq)]
pub struct MusicDictionary {
    pub pitch: [Pitch; 8],
    pub rhythm: [RhythmFigure; 8],
}

const PERSIAN_ON_C: [&str; 8] = ["C4", "Db4", "E4", "F4", "Gb4", "Ab4", "B4", "C5"];

/// Persian scale on C, one degree per vertex in ascending code order
/// (000 → C4 … 111 → C5).
pub fn persian_scale() -> [Pitch; 8] {
    PERSIAN_ON_C.map(|s| s.parse().expect("valid pitch"))
}

/// 000 is a semibreve and 100 a crochet; the other six codes, in ascending
/// order, take minim, dotted minim, quaver, dotted crochet, dotted quaver and
/// semiquaver.
pub fn default_rhythms() -> [RhythmFigure; 8] {
    use RhythmFigure as R;
    [
        R::SEMIBREVE,      // 000
        R::MINIM,          // 001
        R::DOTTED_MINIM,   // 010
        R::QUAVER,         // 011
        R::CROCHET,        // 100
        R::DOTTED_CROCHET, // 101
        R::DOTTED_QUAVER,  // 110
        R::SEMIQUAVER,     // 111
    ]
}

impl Default for MusicDictionary {
    fn default() -> Self {
        Self { pitch: persian_scale(), rhythm: default_rhythms() }
    }
}

impl MusicDictionary {
    pub fn pitch_of(&self, v: CubeVertex) -> Pitch {
        self.pitch[v.code() as usize]
    }

    pub fn rhythm_of(&self, v: CubeVertex) -> RhythmFigure {
        self.rhythm[v.code() as usize]
    }

    /// Loads `{"pitch": {"000": "C4", ...}, "rhythm": {"000": 4, ...}}`.
    /// Entries not present keep their default value.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidDictionary(m);
        let value: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let obj = value.as_object().ok_or_else(|| bad("top level must be an object".into()))?;
        let mut dict = Self::default();
        for key in obj.keys() {
            if key != "pitch" && key != "rhythm" {
                return Err(bad(format!("unknown section {key:?}")));
            }
        }
        let section = |name: &str| -> Result<Option<&Map<String, Value>>> {
            match obj.get(name) {
                None => Ok(None),
                Some(Value::Object(m)) => Ok(Some(m)),
                Some(_) => Err(bad(format!("{name} must be an object"))),
            }
        };
        if let Some(m) = section("pitch")? {
            for (code, v) in m {
                let vertex: CubeVertex = code.parse().map_err(|e: Error| bad(e.to_string()))?;
                let name = v.as_str().ok_or_else(|| bad(format!("pitch for {code} must be a string")))?;
                dict.pitch[vertex.code() as usize] = name.parse().map_err(|e: Error| bad(e.to_string()))?;
            }
        }
        if let Some(m) = section("rhythm")? {
            for (code, v) in m {
                let vertex: CubeVertex = code.parse().map_err(|e: Error| bad(e.to_string()))?;
                let beats = v.as_f64().ok_or_else(|| bad(format!("rhythm for {code} must be a number")))?;
                dict.rhythm[vertex.code() as usize] = RhythmFigure::new(beats).map_err(|e| bad(e.to_string()))?;
            }
        }
        Ok(dict)
    }

    pub fn to_json(&self) -> Value {
        let mut pitch = Map::new();
        let mut rhythm = Map::new();
        for v in CubeVertex::all() {
            pitch.insert(v.label(), Value::String(self.pitch_of(v).to_string()));
            rhythm.insert(v.label(), serde_json::json!(self.rhythm_of(v).beats()));
        }
        serde_json::json!({ "pitch": pitch, "rhythm": rhythm })
    }
}
