use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmuse_core::basak_miranda::{self, GroverConfig};
use qmuse_core::markov::RuleSet;
use qmuse_core::music::{write_midi, MusicDictionary, Score, Spelling, DEFAULT_OCTAVE};
use qmuse_core::qsim::{run_with, Execution, StateVector};
use qmuse_core::qwalk::{self, CubeVertex, WalkConfig};
use qmuse_core::seed::RandomSeed;

#[derive(Parser)]
#[command(name = "qmuse", version, about = "Quantum-circuit music generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Die-driven walk along the twelve-tone series.
    Walk1d(Walk1dArgs),
    /// Walk on the pitch and rhythm cubes.
    Cubewalk(CubewalkArgs),
    /// Grover-amplified rule-following note selection.
    BasakMiranda(BasakMirandaArgs),
    /// Two-qubit amplitude-amplification walkthrough.
    DemoGrover(DemoArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed for all randomness.
    #[arg(long, env = "QMUSE_SEED", default_value_t = 0)]
    seed: u64,
    /// Shots per circuit run.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    /// Worker threads for shot sampling; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Output file; repeatable. The format follows the extension
    /// (.mid, .csv, .json, .txt).
    #[arg(long = "out")]
    out: Vec<PathBuf>,
    /// Format written to stdout when no --out is given.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tempo for MIDI output.
    #[arg(long, default_value_t = 120.0)]
    tempo: f64,
    /// Print note names with Unicode accidentals.
    #[arg(long)]
    unicode: bool,
}

#[derive(Args)]
struct Walk1dArgs {
    #[command(flatten)]
    common: Common,
    /// Starting note name.
    #[arg(long, default_value = "E")]
    start: String,
    #[arg(long, default_value_t = 16)]
    steps: usize,
    /// Note length in beats.
    #[arg(long, default_value_t = 1.0)]
    beats: f64,
}

#[derive(Args)]
struct CubewalkArgs {
    #[command(flatten)]
    common: Common,
    /// Starting pitch vertex, three binary digits.
    #[arg(long, default_value = "000")]
    start_pitch: String,
    /// Starting rhythm vertex, three binary digits.
    #[arg(long, default_value = "100")]
    start_rhythm: String,
    #[arg(long, default_value_t = 29)]
    steps: usize,
    /// JSON dictionary overriding vertex pitches and rhythms.
    #[arg(long)]
    dictionary: Option<PathBuf>,
}

#[derive(Args)]
struct BasakMirandaArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "D#")]
    start: String,
    /// Number of selection cycles.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    length: u64,
    /// JSON rule file.
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    beats: f64,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, env = "QMUSE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    /// Print the chain as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Midi,
    Csv,
    Json,
    Text,
}

impl Format {
    fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "mid" | "midi" => Some(Format::Midi),
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "txt" | "text" => Some(Format::Text),
            _ => None,
        }
    }
}

enum Failure {
    Usage(String),
    Io(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Io(m) => write!(f, "I/O error: {m}"),
            Failure::Invariant(m) => write!(f, "invariant violated: {m}"),
        }
    }
}

fn usage(e: impl fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// The rendered forms a command can produce.
struct Outputs {
    midi: Vec<u8>,
    csv: String,
    json: String,
    text: String,
}

impl Outputs {
    fn get(&self, f: Format) -> &[u8] {
        match f {
            Format::Midi => &self.midi,
            Format::Csv => self.csv.as_bytes(),
            Format::Json => self.json.as_bytes(),
            Format::Text => self.text.as_bytes(),
        }
    }
}

impl Common {
    fn execution(&self) -> Execution {
        match self.threads {
            Some(n) if n > 1 => Execution::Parallel,
            _ => Execution::Sequential,
        }
    }

    fn spelling(&self) -> Spelling {
        if self.unicode {
            Spelling::Unicode
        } else {
            Spelling::Ascii
        }
    }

    fn check_targets(&self) -> Result<(), Failure> {
        for p in &self.out {
            if Format::from_path(p).is_none() {
                return Err(usage(format!(
                    "cannot infer output format from {} (use .mid, .csv, .json or .txt)",
                    p.display()
                )));
            }
        }
        if !(self.tempo.is_finite() && self.tempo > 0.0) {
            return Err(usage(format!("tempo must be positive, got {}", self.tempo)));
        }
        Ok(())
    }

    fn emit(&self, outputs: &Outputs) -> Result<(), Failure> {
        if self.out.is_empty() {
            let mut stdout = io::stdout().lock();
            return stdout
                .write_all(outputs.get(self.format))
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(e.to_string()));
        }
        for p in &self.out {
            let f = Format::from_path(p).expect("checked before running");
            fs::write(p, outputs.get(f)).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn render(score: &Score, spelling: Spelling, csv: String, json: serde_json::Value) -> Result<Outputs, Failure> {
    Ok(Outputs {
        midi: write_midi(score).map_err(|e| Failure::Invariant(e.to_string()))?,
        csv,
        json: format!("{:#}\n", json),
        text: score.render_text(spelling).0,
    })
}

fn walk1d(args: Walk1dArgs) -> Result<(), Failure> {
    let c = &args.common;
    c.check_targets()?;
    let rules = RuleSet::twelve_tone();
    let alphabet = rules.alphabet();
    let start = alphabet.index_of(&args.start).map_err(usage)?;
    let config = WalkConfig { steps: args.steps, shots: c.shots, seed: RandomSeed(c.seed), execution: c.execution() };
    let walk = qwalk::walk1d_generate(start, alphabet.len(), &config).map_err(usage)?;
    let score = Score::from_alphabet(alphabet, &walk.positions, DEFAULT_OCTAVE, args.beats, c.tempo).map_err(usage)?;
    let name = |i: usize| alphabet.label(i, c.spelling());
    let json = json!({ "seed": c.seed, "walk": walk.to_json(name) });
    let outputs = render(&score, c.spelling(), walk.to_csv(name), json)?;
    c.emit(&outputs)
}

fn cubewalk(args: CubewalkArgs) -> Result<(), Failure> {
    let c = &args.common;
    c.check_targets()?;
    let pitch: CubeVertex = args.start_pitch.parse().map_err(usage)?;
    let rhythm: CubeVertex = args.start_rhythm.parse().map_err(usage)?;
    let dict = match &args.dictionary {
        Some(p) => MusicDictionary::from_json_str(&read_file(p)?).map_err(usage)?,
        None => MusicDictionary::default(),
    };
    let config = WalkConfig { steps: args.steps, shots: c.shots, seed: RandomSeed(c.seed), execution: c.execution() };
    let trace = qwalk::cube_generate(pitch, rhythm, &config).map_err(usage)?;
    if let Some(bad) = trace.records.windows(2).find(|w| {
        w[0].pitch.hamming(w[1].pitch) > 1 || w[0].rhythm.hamming(w[1].rhythm) > 1
    }) {
        return Err(Failure::Invariant(format!("step {} left the cube neighbourhood", bad[1].step)));
    }
    let score = Score::from_trace(&trace, &dict, c.tempo).map_err(usage)?;
    let outputs = render(&score, c.spelling(), trace.to_csv(), trace.to_json())?;
    c.emit(&outputs)
}

fn basak_miranda_cmd(args: BasakMirandaArgs) -> Result<(), Failure> {
    let c = &args.common;
    c.check_targets()?;
    let rules = match &args.rules {
        Some(p) => RuleSet::from_json_str(&read_file(p)?).map_err(usage)?,
        None => RuleSet::twelve_tone(),
    };
    let alphabet = rules.alphabet();
    let start = alphabet.index_of(&args.start).map_err(usage)?;
    let config = GroverConfig { shots: c.shots, seed: RandomSeed(c.seed), iteration_override: None, execution: c.execution() };
    let generation = basak_miranda::generate(&rules, start, args.length as usize, &config).map_err(usage)?;
    let violations = rules.violations(&generation.notes);
    if violations > 0 {
        return Err(Failure::Invariant(format!("{violations} transitions break the rules")));
    }
    let score = Score::from_alphabet(alphabet, &generation.notes, DEFAULT_OCTAVE, args.beats, c.tempo).map_err(usage)?;
    let name = |i: usize| alphabet.label(i, c.spelling());
    let json = generation.to_json(c.shots, config.seed, name);
    let outputs = render(&score, c.spelling(), generation.to_csv(name), json)?;
    c.emit(&outputs)
}

fn amps(s: &StateVector) -> Vec<f64> {
    s.amplitudes().iter().map(|z| z.re).collect()
}

fn fmt_amps(s: &StateVector) -> String {
    let parts: Vec<String> = amps(s).iter().map(|a| format!("{:+.4}", a + 0.0)).collect();
    format!("[{}]", parts.join(", "))
}

fn demo_grover(args: DemoArgs) -> Result<(), Failure> {
    let oracle = basak_miranda::build_oracle(&[0, 1], 2).map_err(|e| Failure::Invariant(e.to_string()))?;
    let trace = basak_miranda::remix_trace(&oracle).map_err(|e| Failure::Invariant(e.to_string()))?;
    let circuit = basak_miranda::two_qubit_interference_circuit();
    let probs = circuit.outcome_probabilities().map_err(|e| Failure::Invariant(e.to_string()))?;
    let hist = run_with(&circuit, args.shots, RandomSeed(args.seed), Execution::Sequential)
        .map_err(|e| Failure::Invariant(e.to_string()))?;
    let stages = [
        ("phi1", "balanced superposition", &trace.balanced),
        ("phi2", "after oracle", &trace.after_oracle),
        ("phi3", "after H", &trace.after_hadamard),
        ("phi4", "after shift", &trace.after_shift),
        ("phi5", "after H (remixed)", &trace.remixed),
    ];
    let label = |k: usize| format!("{k:02b}");
    let out = if args.json {
        let chain: Vec<_> = stages
            .iter()
            .map(|(id, what, s)| json!({ "state": id, "stage": what, "amplitudes": amps(s) }))
            .collect();
        let histogram: Vec<_> = hist.iter().map(|(k, n)| json!({ "state": label(k), "count": n })).collect();
        let p: serde_json::Map<_, _> = probs.iter().enumerate().map(|(k, p)| (label(k), json!(p))).collect();
        let doc = json!({
            "target": "01",
            "chain": chain,
            "delta": [trace.delta_balanced, trace.delta_after_oracle],
            "probabilities": p,
            "shots": args.shots,
            "seed": args.seed,
            "histogram": histogram,
        });
        format!("{doc:#}\n")
    } else {
        let mut s = String::from("target |01>\n");
        for (id, what, st) in &stages {
            s.push_str(&format!("{id} {what:<24} {}\n", fmt_amps(st)));
        }
        s.push_str(&format!("delta balanced     {:.4}\n", trace.delta_balanced));
        s.push_str(&format!("delta after oracle {:.4}\n", trace.delta_after_oracle));
        s.push_str(&format!("histogram ({} shots):", args.shots));
        for (k, n) in hist.iter() {
            s.push_str(&format!(" {}={n}", label(k)));
        }
        s.push('\n');
        s.push_str(&format!("P(01) = {:.4}\n", probs[1]));
        s
    };
    io::stdout().write_all(out.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let threads = match &cli.command {
        Command::Walk1d(a) => a.common.threads,
        Command::Cubewalk(a) => a.common.threads,
        Command::BasakMiranda(a) => a.common.threads,
        Command::DemoGrover(_) => None,
    };
    let body = move || match cli.command {
        Command::Walk1d(a) => walk1d(a),
        Command::Cubewalk(a) => cubewalk(a),
        Command::BasakMiranda(a) => basak_miranda_cmd(a),
        Command::DemoGrover(a) => demo_grover(a),
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| Failure::Io(e.to_string()))?
            .install(body),
        None => body(),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qmuse: {f}");
            ExitCode::from(f.code())
        }
    }
}
