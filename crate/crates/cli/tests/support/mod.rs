#![allow(dead_code)]

pub mod midi;

use std::path::Path;
use std::process::{Command, Output};

pub fn qmuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmuse"))
        .args(args)
        .env_remove("QMUSE_SEED")
        .output()
        .expect("binary runs")
}

pub fn qmuse_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmuse"))
        .args(args)
        .current_dir(dir)
        .env_remove("QMUSE_SEED")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
