//! Exact real-amplitude simulation of quantum search over `a` block types,
//! the iteration count and timing laws built on it, and the imperfect
//! (decohering) assembly model.
//!
//! One search round is a sign flip of the target amplitude followed by a
//! reflection of every amplitude about the mean. Starting from the uniform
//! superposition the amplitudes stay real, so a `Vec<f64>` is an exact
//! state representation.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{check_inputs, RateModel, RateParams, RatePrediction, SimResult};
use crate::error::{positive, probability, Error, Result};
use crate::model::{classical_coefficient, AlphabetSpec, ChainTask, TimingParams};
use crate::rng::{replicate_rng, Stream};

/// Largest alphabet for which the constant quantum rate law applies.
pub const MAX_CONSTANT_RATE_ALPHABET: usize = 4;

/// Distance from an integer below which a solved iteration count is taken as exact.
const INTEGRAL_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroverState {
    amplitudes: Vec<f64>,
    target: usize,
    iterations_applied: usize,
}

impl GroverState {
    /// Uniform superposition over `a` states.
    pub fn uniform(a: usize, target: usize) -> Result<Self> {
        if a == 0 {
            return Err(Error::EmptyAlphabet(0));
        }
        if target >= a {
            return Err(Error::TargetOutOfRange { index: target, a });
        }
        let amp = 1.0 / (a as f64).sqrt();
        Ok(Self { amplitudes: vec![amp; a], target, iterations_applied: 0 })
    }

    /// Wraps explicit amplitudes, checking normalisation to 1e-12.
    pub fn from_amplitudes(amplitudes: Vec<f64>, target: usize) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyAlphabet(0));
        }
        if target >= amplitudes.len() {
            return Err(Error::TargetOutOfRange { index: target, a: amplitudes.len() });
        }
        let state = Self { amplitudes, target, iterations_applied: 0 };
        let norm = state.norm_squared();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("amplitudes are not normalised: sum of squares {norm}")));
        }
        Ok(state)
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn iterations_applied(&self) -> usize {
        self.iterations_applied
    }

    pub fn size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|x| x * x).sum()
    }

    /// Probability of observing the target state.
    pub fn success_probability(&self) -> f64 {
        let t = self.amplitudes[self.target];
        t * t
    }

    /// Negates the target amplitude.
    pub fn oracle_flip(&self) -> Self {
        let mut next = self.clone();
        next.amplitudes[self.target] = -next.amplitudes[self.target];
        next
    }

    /// Reflects every amplitude about the mean: `x -> 2 mean - x`.
    pub fn inversion_about_mean(&self) -> Self {
        let mean = self.amplitudes.iter().sum::<f64>() / self.amplitudes.len() as f64;
        let amplitudes = self.amplitudes.iter().map(|&x| 2.0 * mean - x).collect();
        Self { amplitudes, ..self.clone() }
    }

    /// One full search round (flip then reflect).
    pub fn iterate(&self) -> Self {
        let mut next = self.oracle_flip().inversion_about_mean();
        next.iterations_applied += 1;
        next
    }
}

/// `arcsin(1/sqrt(a))`, the rotation half-angle of one search round.
pub fn grover_angle(a: usize) -> Result<f64> {
    if a == 0 {
        return Err(Error::EmptyAlphabet(0));
    }
    Ok((1.0 / (a as f64).sqrt()).asin())
}

/// Real solution `Q` of `(2Q + 1) arcsin(1/sqrt(a)) = pi/2`.
pub fn iteration_count_real(a: usize) -> Result<f64> {
    let theta = grover_angle(a)?;
    Ok((FRAC_PI_2 / theta - 1.0) / 2.0)
}

/// Number of search rounds: `Q` when integral, otherwise the next integer above it.
pub fn iterations_required(a: usize) -> Result<usize> {
    let q = iteration_count_real(a)?;
    let nearest = q.round();
    let count = if (q - nearest).abs() < INTEGRAL_SNAP { nearest } else { q.ceil() };
    Ok(count.max(0.0) as usize)
}

/// Runs `k` search rounds from the uniform state.
pub fn grover_search(a: usize, target: usize, k: usize) -> Result<(GroverState, f64)> {
    let mut state = GroverState::uniform(a, target)?;
    for _ in 0..k {
        state = state.iterate();
    }
    let p = state.success_probability();
    Ok((state, p))
}

/// `sin^2((2k + 1) arcsin(1/sqrt(a)))`.
pub fn success_probability_closed_form(a: usize, k: usize) -> Result<f64> {
    let theta = grover_angle(a)?;
    let s = ((2 * k + 1) as f64 * theta).sin();
    Ok(s * s)
}

/// Search rounds charged per base: the iteration count, but at least one
/// since a single-type alphabet still needs its block picked and attached.
pub fn attempt_blocks(a: usize) -> Result<usize> {
    Ok(iterations_required(a)?.max(1))
}

/// Ideal quantum assembly time `iterations(a) * t_r * n`, with the
/// single-type alphabet charged one round per base.
pub fn quantum_assembly_time(a: usize, n: usize, t_r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptyChain);
    }
    let t_r = positive("t_r", t_r)?;
    Ok(attempt_blocks(a)? as f64 * t_r * n as f64)
}

/// Ideal quantum replication rate `1 / t_r`, independent of `a` for `a <= 4`.
pub fn quantum_rate(a: usize, t_r: f64) -> Result<RatePrediction> {
    if a == 0 || a > MAX_CONSTANT_RATE_ALPHABET {
        return Err(Error::AlphabetOutOfRange { a, min: 1, max: MAX_CONSTANT_RATE_ALPHABET });
    }
    let t_r = positive("t_r", t_r)?;
    let n = 1;
    Ok(RatePrediction {
        model: RateModel::QuantumIdeal,
        a,
        rate: n as f64 / quantum_assembly_time(a, n, t_r)?,
        params_echo: RateParams { t_r: Some(t_r), ..Default::default() },
    })
}

/// Minimum per-attempt success probability for imperfect quantum assembly
/// to beat the best classical alphabet: `T_q(a=4) / T_c(a=3)` at equal
/// information content.
pub fn coherence_threshold(t_r: f64, t_d: f64) -> Result<f64> {
    let t_r = positive("t_r", t_r)?;
    let t_d = positive("t_d", t_d)?;
    // Both times per nat of information: T_q(4)/ln N and T_c(3)/ln N.
    let quantum_per_nat = attempt_blocks(4)? as f64 * t_r / 4f64.ln();
    let classical_per_nat = classical_coefficient(3.0)? * t_d;
    Ok(quantum_per_nat / classical_per_nat)
}

/// How a single search attempt's own success probability is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuantumMode {
    /// Every undisturbed attempt succeeds, as in the ideal time law.
    #[default]
    Idealized,
    /// Undisturbed attempts succeed with the search's measured probability.
    Physical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImperfectQuantumConfig {
    p_coherence: f64,
    t_r_over_t_d: f64,
    mode: QuantumMode,
}

impl ImperfectQuantumConfig {
    pub fn new(p_coherence: f64, t_r_over_t_d: f64, mode: QuantumMode) -> Result<Self> {
        Ok(Self {
            p_coherence: probability("p_coherence", p_coherence)?,
            t_r_over_t_d: positive("t_r_over_t_d", t_r_over_t_d)?,
            mode,
        })
    }

    /// Config whose time ratio is taken from `timing`.
    pub fn for_timing(p_coherence: f64, timing: &TimingParams, mode: QuantumMode) -> Result<Self> {
        Self::new(p_coherence, timing.t_r() / timing.t_d(), mode)
    }

    pub fn p_coherence(&self) -> f64 {
        self.p_coherence
    }

    pub fn t_r_over_t_d(&self) -> f64 {
        self.t_r_over_t_d
    }

    pub fn mode(&self) -> QuantumMode {
        self.mode
    }

    /// Probability that one attempt on alphabet `a` completes successfully.
    pub fn effective_success(&self, a: usize) -> Result<f64> {
        let search = match self.mode {
            QuantumMode::Idealized => 1.0,
            QuantumMode::Physical => success_probability_closed_form(a, iterations_required(a)?)?,
        };
        Ok(self.p_coherence * search)
    }

    /// Break-even success probability for this time ratio.
    pub fn threshold(&self) -> f64 {
        coherence_threshold(self.t_r_over_t_d, 1.0).expect("ratio validated on construction")
    }
}

/// Monte Carlo of quantum assembly under decoherence.
///
/// Each base is retried until an attempt succeeds; attempts cost
/// `attempt_blocks(a) * t_r` and succeed with
/// [`ImperfectQuantumConfig::effective_success`].
pub fn simulate_imperfect_quantum(
    alphabet: &AlphabetSpec,
    task: &ChainTask,
    timing: &TimingParams,
    config: &ImperfectQuantumConfig,
    seed: u64,
    replicates: usize,
) -> Result<SimResult> {
    check_inputs(alphabet, task, replicates)?;
    let a = alphabet.size();
    if a > MAX_CONSTANT_RATE_ALPHABET {
        return Err(Error::AlphabetOutOfRange { a, min: 1, max: MAX_CONSTANT_RATE_ALPHABET });
    }
    let ratio = timing.t_r() / timing.t_d();
    if (ratio - config.t_r_over_t_d).abs() > 1e-9 * config.t_r_over_t_d {
        return Err(Error::RatioMismatch { timing: ratio, config: config.t_r_over_t_d });
    }
    let p_eff = config.effective_success(a)?;
    if p_eff <= 0.0 {
        return Err(Error::NeverSucceeds);
    }
    let cost = attempt_blocks(a)? as f64 * timing.t_r();
    let n = task.len();
    let attempts: Vec<u64> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, Stream::Quantum, r);
            let mut tries = 0u64;
            for _ in 0..n {
                loop {
                    tries += 1;
                    if rng.random_bool(p_eff) {
                        break;
                    }
                }
            }
            tries
        })
        .collect();
    Ok(SimResult::from_attempts(&attempts, cost, n, seed))
}

/// Whether a simulated quantum batch assembled its information faster than
/// the best classical alphabet (`a = 3`) would on average.
pub fn beats_best_classical(result: &SimResult, task: &ChainTask, t_d: f64) -> Result<bool> {
    let per_nat = result.time_per_nat(task.ln_information());
    Ok(per_nat < classical_coefficient(3.0)? * t_d)
}
