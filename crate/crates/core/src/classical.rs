//! Classical memoryless pick-check-discard assembly.
//!
//! Each position is filled by drawing uniformly from the `a` block types
//! until the drawn block matches the template; every draw costs `t_d`.
//! The number of draws per position is geometric with mean `a`, which gives
//! `T_c = t_d a n` and the rate law `R_c = 1 / (a t_d)`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::model::{AlphabetSpec, ChainTask, TimingParams};
use crate::rng::{replicate_rng, Stream};

/// Aggregate of a seeded batch of simulated assemblies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    /// Mean assembly time over replicates.
    pub total_time: f64,
    /// Mean number of attempts per assembled position.
    pub attempts_per_base: f64,
    pub n_assembled: usize,
    pub seed: u64,
    pub replicates: usize,
}

impl SimResult {
    pub(crate) fn from_attempts(attempts: &[u64], cost: f64, n: usize, seed: u64) -> Self {
        let replicates = attempts.len();
        // Integer sums are exact, so the aggregate does not depend on how
        // replicates were scheduled.
        let total: u64 = attempts.iter().sum();
        let mean_attempts = total as f64 / replicates as f64;
        Self {
            total_time: mean_attempts * cost,
            attempts_per_base: mean_attempts / n as f64,
            n_assembled: n,
            seed,
            replicates,
        }
    }

    /// Mean time per unit of information, `total_time / ln N`.
    pub fn time_per_nat(&self, ln_information: f64) -> f64 {
        self.total_time / ln_information
    }
}

/// Which rate law produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RateModel {
    Classical,
    QuantumIdeal,
    QuantumImperfect,
}

/// Inputs a rate prediction was computed from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RateParams {
    pub t_d: Option<f64>,
    pub t_r: Option<f64>,
    pub p_coherence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePrediction {
    pub model: RateModel,
    pub a: usize,
    /// Assembled bases per unit time.
    pub rate: f64,
    pub params_echo: RateParams,
}

/// Expected classical assembly time `t_d * a * n`.
pub fn expected_classical_time(alphabet: &AlphabetSpec, task: &ChainTask, timing: &TimingParams) -> f64 {
    timing.t_a(alphabet.size()) * task.len() as f64
}

/// Classical replication rate `1 / (a t_d)`.
pub fn classical_rate(a: usize, t_d: f64) -> Result<RatePrediction> {
    if a == 0 {
        return Err(Error::EmptyAlphabet(0));
    }
    let t_d = positive("t_d", t_d)?;
    Ok(RatePrediction {
        model: RateModel::Classical,
        a,
        rate: 1.0 / (a as f64 * t_d),
        params_echo: RateParams { t_d: Some(t_d), ..Default::default() },
    })
}

fn check_task(alphabet: &AlphabetSpec, task: &ChainTask) -> Result<()> {
    if task.alphabet_size() != alphabet.size() {
        return Err(Error::Invalid(format!(
            "task was built for alphabet size {} but alphabet has size {}",
            task.alphabet_size(),
            alphabet.size()
        )));
    }
    Ok(())
}

pub(crate) fn check_inputs(alphabet: &AlphabetSpec, task: &ChainTask, replicates: usize) -> Result<()> {
    check_task(alphabet, task)?;
    if replicates == 0 {
        return Err(Error::NoReplicates);
    }
    Ok(())
}

/// Monte Carlo realisation of classical assembly.
///
/// Replicate `r` uses its own generator seeded from `(seed, r)`, so the
/// result is identical regardless of thread scheduling.
pub fn simulate_classical(
    alphabet: &AlphabetSpec,
    task: &ChainTask,
    timing: &TimingParams,
    seed: u64,
    replicates: usize,
) -> Result<SimResult> {
    check_inputs(alphabet, task, replicates)?;
    let a = alphabet.size();
    let target = task.target();
    let attempts: Vec<u64> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, Stream::Classical, r);
            let mut picks = 0u64;
            for &want in target {
                loop {
                    picks += 1;
                    if rng.random_range(0..a) == want {
                        break;
                    }
                }
            }
            picks
        })
        .collect();
    Ok(SimResult::from_attempts(&attempts, timing.t_d(), task.len(), seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRatio {
    pub a_numerator: usize,
    pub a_denominator: usize,
    /// `R_c(a_numerator) / R_c(a_denominator)`.
    pub ratio: f64,
}

/// Ratios of classical rates for every ordered pair `i < j` of `a_values`.
///
/// `t_d` cancels, so the table depends on the alphabet sizes only.
pub fn rate_ratio_table(t_d: f64, a_values: &[usize]) -> Result<Vec<RateRatio>> {
    if a_values.is_empty() {
        return Err(Error::Empty("alphabet size list"));
    }
    let rates = a_values
        .iter()
        .map(|&a| classical_rate(a, t_d).map(|p| p.rate))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Vec::new();
    for i in 0..a_values.len() {
        for j in i + 1..a_values.len() {
            table.push(RateRatio {
                a_numerator: a_values[i],
                a_denominator: a_values[j],
                ratio: rates[i] / rates[j],
            });
        }
    }
    Ok(table)
}
