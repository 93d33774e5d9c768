use std::collections::BTreeMap;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::circuit::Circuit;
use crate::error::{Error, Result};
use crate::seed::{unit_f64, RandomSeed};

/// How shots are evaluated. Both modes give identical histograms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Execution {
    #[default]
    Sequential,
    /// Shots are spread over the current rayon pool.
    Parallel,
}

/// Outcome counts of a multi-shot run. Keys are measured-register indices
/// (bit `j` = `j`-th measured qubit).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    counts: BTreeMap<usize, u64>,
    shots: u64,
    n_bits: usize,
}

impl Histogram {
    pub fn new(n_bits: usize) -> Self {
        Self { counts: BTreeMap::new(), shots: 0, n_bits }
    }

    pub fn from_outcomes(n_bits: usize, outcomes: impl IntoIterator<Item = usize>) -> Self {
        let mut h = Self::new(n_bits);
        for o in outcomes {
            h.record(o);
        }
        h
    }

    pub fn record(&mut self, outcome: usize) {
        *self.counts.entry(outcome).or_insert(0) += 1;
        self.shots += 1;
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn count(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    /// Non-zero counts in ascending outcome order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn frequency(&self, outcome: usize) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(outcome) as f64 / self.shots as f64
        }
    }

    /// Majority vote; ties go to the smallest outcome.
    pub fn most_frequent(&self) -> Option<usize> {
        self.most_frequent_among(|_| true)
    }

    /// Majority vote restricted to outcomes accepted by `keep`.
    pub fn most_frequent_among(&self, keep: impl Fn(usize) -> bool) -> Option<usize> {
        let mut best: Option<(usize, u64)> = None;
        for (k, v) in self.iter().filter(|(k, _)| keep(*k)) {
            match best {
                Some((_, bv)) if bv >= v => {}
                _ => best = Some((k, v)),
            }
        }
        best.map(|(k, _)| k)
    }
}

/// Inverse-CDF lookup that never lands on a zero-probability outcome.
fn pick(cumulative: &[(usize, f64)], u: f64) -> usize {
    cumulative
        .iter()
        .find(|(_, c)| u < *c)
        .or(cumulative.last())
        .map(|(k, _)| *k)
        .expect("distribution has support")
}

/// Draws one outcome for shot `shot` of a run seeded by `seed`.
fn draw(cumulative: &[(usize, f64)], seed: RandomSeed, shot: u64) -> usize {
    let mut rng = RandomSeed(seed.shot_seed(shot)).rng();
    pick(cumulative, unit_f64(rng.next_u64()))
}

fn cumulative(probs: &[f64]) -> Vec<(usize, f64)> {
    let mut acc = 0.0;
    probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(k, &p)| {
            acc += p;
            (k, acc)
        })
        .collect()
}

/// Samples `shots` outcomes of the measured register.
///
/// The final statevector is computed once; every shot then draws from the
/// exact marginal distribution using its own generator seeded with
/// `splitmix64(master ^ shot_index)`.
pub fn run(circuit: &Circuit, shots: u64, seed: RandomSeed) -> Result<Histogram> {
    run_with(circuit, shots, seed, Execution::Sequential)
}

pub fn run_with(circuit: &Circuit, shots: u64, seed: RandomSeed, exec: Execution) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let probs = circuit.outcome_probabilities()?;
    Ok(sample_distribution(&probs, circuit.measured().len(), shots, seed, exec))
}

/// Shot sampling from an explicit distribution over `2^n_bits` outcomes.
pub fn sample_distribution(
    probs: &[f64],
    n_bits: usize,
    shots: u64,
    seed: RandomSeed,
    exec: Execution,
) -> Histogram {
    let cum = cumulative(probs);
    let outcomes: Vec<usize> = match exec {
        Execution::Sequential => (0..shots).map(|s| draw(&cum, seed, s)).collect(),
        Execution::Parallel => (0..shots).into_par_iter().map(|s| draw(&cum, seed, s)).collect(),
    };
    Histogram::from_outcomes(n_bits, outcomes)
}
