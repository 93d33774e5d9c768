mod support;

use std::fs;
use std::process::Command;

use support::midi::parse;
use support::{qmuse, qmuse_in, stderr, stdout};

fn lines(s: &str) -> Vec<&str> {
    s.lines().collect()
}

#[test]
fn walk1d_writes_one_note_per_position() {
    let dir = tempfile::tempdir().unwrap();
    let o = qmuse_in(dir.path(), &["walk1d", "--start", "C#", "--steps", "16", "--seed", "7", "--out", "out.mid"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = parse(&fs::read(dir.path().join("out.mid")).unwrap());
    assert_eq!(p.notes.len(), 17);
    assert_eq!(p.notes[0], (61, 480));
}

#[test]
fn walk1d_from_the_lower_end_goes_to_f() {
    let o = qmuse(&["walk1d", "--start", "E", "--steps", "1"]);
    assert_eq!(lines(&stdout(&o)), vec!["E4 1", "F4 1"]);
}

#[test]
fn unknown_note_is_a_usage_error() {
    let o = qmuse(&["walk1d", "--start", "H"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("E, F, G, C#, F#, D#, G#, D, B, C, A, A#"), "{err}");
}

#[test]
fn cubewalk_trace_has_table_shape_and_repeats() {
    let args = ["cubewalk", "--start-pitch", "000", "--start-rhythm", "100", "--steps", "29", "--shots", "40", "--seed", "1", "--format", "csv"];
    let a = stdout(&qmuse(&args));
    assert_eq!(a.lines().count(), 31);
    assert_eq!(a.lines().next(), Some("step,pitch_code,rhythm_code"));
    assert_eq!(a.lines().nth(1), Some("0,000,100"));
    assert_eq!(stdout(&qmuse(&args)), a);
}

#[test]
fn zero_shots_and_bad_codes_are_rejected() {
    assert_eq!(qmuse(&["cubewalk", "--shots", "0"]).status.code(), Some(2));
    assert_eq!(qmuse(&["cubewalk", "--start-pitch", "0102"]).status.code(), Some(2));
    assert_eq!(qmuse(&["basak-miranda", "--shots", "0"]).status.code(), Some(2));
    assert_eq!(qmuse(&["walk1d", "--out", "trace.xyz"]).status.code(), Some(2));
}

#[test]
fn cube_json_carries_histograms() {
    let o = qmuse(&["cubewalk", "--steps", "2", "--seed", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 3);
    assert!(steps[0]["pitch_histogram"].is_null());
    let total: u64 = steps[1]["pitch_histogram"].as_array().unwrap().iter().map(|b| b["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 40);
}

#[test]
fn custom_dictionary_is_used() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.json"), r#"{"pitch": {"000": "A3"}, "rhythm": {"100": 0.5}}"#).unwrap();
    let o = qmuse_in(dir.path(), &["cubewalk", "--steps", "0", "--dictionary", "d.json"]);
    assert_eq!(stdout(&o), "A3 0.5\n");
    let o = qmuse_in(dir.path(), &["cubewalk", "--dictionary", "missing.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn basak_miranda_follows_rules() {
    let o = qmuse(&["basak-miranda", "--start", "D#", "--length", "12", "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 13);
    for seed in 0..10 {
        let o = qmuse(&["basak-miranda", "--length", "1", "--start", "A#", "--seed", &seed.to_string()]);
        let out = stdout(&o);
        let second = out.lines().nth(1).unwrap();
        assert!(second == "B4 1" || second == "A4 1", "{second}");
    }
}

#[test]
fn unicode_accidentals_are_accepted() {
    let a = stdout(&qmuse(&["basak-miranda", "--start", "D♯", "--length", "3"]));
    let b = stdout(&qmuse(&["basak-miranda", "--start", "Eb", "--length", "3"]));
    assert_eq!(a, b);
    assert!(a.starts_with("D#4 1\n"));
}

#[test]
fn custom_rules_are_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let mut rules = serde_json::Map::new();
    let series = ["E", "F", "G", "C#", "F#", "D#", "G#", "D", "B", "C", "A", "A#"];
    for (i, n) in series.iter().enumerate() {
        rules.insert(n.to_string(), serde_json::json!([series[(i + 1) % 12]]));
    }
    let text = serde_json::json!({ "rules": rules }).to_string();
    fs::write(dir.path().join("cycle.json"), &text).unwrap();
    let o = qmuse_in(dir.path(), &["basak-miranda", "--rules", "cycle.json", "--start", "E", "--length", "4"]);
    assert_eq!(stdout(&o), "E4 1\nF4 1\nG4 1\nC#4 1\nF#4 1\n");

    fs::write(dir.path().join("empty.json"), text.replace(r#""G":["C#"]"#, r#""G":[]"#)).unwrap();
    let o = qmuse_in(dir.path(), &["basak-miranda", "--rules", "empty.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('G'), "{}", stderr(&o));
}

#[test]
fn cycle_exports() {
    let dir = tempfile::tempdir().unwrap();
    let o = qmuse_in(dir.path(), &["basak-miranda", "--length", "3", "--out", "c.csv", "--out", "c.json"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(csv.starts_with("cycle,current,state,count,percent,winner\n"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    assert_eq!(v["cycles"].as_array().unwrap().len(), 3);
    let pct: f64 = v["cycles"][0]["histogram"].as_array().unwrap().iter().map(|b| b["percent"].as_f64().unwrap()).sum();
    assert!((pct - 100.0).abs() < 1e-9);
}

#[test]
fn demo_reports_certain_outcome() {
    let out = stdout(&qmuse(&["demo-grover"]));
    assert_eq!(out.lines().last(), Some("P(01) = 1.0000"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&qmuse(&["demo-grover", "--json"]))).unwrap();
    assert_eq!(v["chain"].as_array().unwrap().len(), 5);
    assert!((v["probabilities"]["01"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn seed_falls_back_to_environment() {
    let env = Command::new(env!("CARGO_BIN_EXE_qmuse"))
        .args(["cubewalk", "--steps", "5", "--format", "csv"])
        .env("QMUSE_SEED", "11")
        .output()
        .unwrap();
    let flag = qmuse(&["cubewalk", "--steps", "5", "--format", "csv", "--seed", "11"]);
    assert_eq!(env.stdout, flag.stdout);
}
