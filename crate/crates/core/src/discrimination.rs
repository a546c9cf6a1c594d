//! Telling the classical rate law `R = c/a` apart from the quantum law
//! `R = c` using replication rates measured across reduced alphabets.
//!
//! Rates carry multiplicative Gaussian noise. Each law has one free scale,
//! fitted in closed form; the verdict compares weighted residuals and a
//! parametric bootstrap under the rejected law gives the p-value.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{positive, probability, Error, Result};
use crate::grover::coherence_threshold;
use crate::model::golden_section_min;
use crate::rng::{replicate_rng, sub_seed, SimRng, Stream};

/// Alphabet sizes realisable with designer strands.
pub const DESIGNER_ALPHABETS: [usize; 4] = [1, 2, 3, 4];
pub const DEFAULT_BOOTSTRAP: usize = 1000;
pub const MIN_BOOTSTRAP: usize = 100;
pub const DEFAULT_ALPHA: f64 = 0.05;
pub const MIN_POWER_TRIALS: usize = 10;
/// Relative noise used when a "noiseless" level (sigma = 0) is requested.
pub const NOISELESS_SIGMA: f64 = 1e-9;
/// Mixing weights inside this band count as an intermediate regime.
pub const INTERMEDIATE_BAND: (f64, f64) = (0.1, 0.9);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RateLaw {
    Classical,
    Quantum,
}

impl RateLaw {
    /// Rate shape up to the scale factor.
    pub fn shape(self, a: usize) -> f64 {
        match self {
            RateLaw::Classical => 1.0 / a as f64,
            RateLaw::Quantum => 1.0,
        }
    }

    pub fn other(self) -> Self {
        match self {
            RateLaw::Classical => RateLaw::Quantum,
            RateLaw::Quantum => RateLaw::Classical,
        }
    }
}

/// True rate curve used to synthesise data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RateCurve {
    Law(RateLaw),
    /// `w/a + (1 - w)`: classical weight `w`, the rest constant.
    Mixed { weight: f64 },
}

impl RateCurve {
    pub fn shape(self, a: usize) -> f64 {
        match self {
            RateCurve::Law(law) => law.shape(a),
            RateCurve::Mixed { weight } => mixed_shape(weight, a),
        }
    }
}

impl From<RateLaw> for RateCurve {
    fn from(law: RateLaw) -> Self {
        RateCurve::Law(law)
    }
}

fn mixed_shape(weight: f64, a: usize) -> f64 {
    weight / a as f64 + (1.0 - weight)
}

/// One measured replication rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSample {
    pub a: usize,
    pub observed_rate: f64,
    pub sigma_rel: f64,
}

impl RateSample {
    pub fn new(a: usize, observed_rate: f64, sigma_rel: f64) -> Result<Self> {
        if !DESIGNER_ALPHABETS.contains(&a) {
            return Err(Error::AlphabetOutOfRange { a, min: 1, max: 4 });
        }
        Ok(Self {
            a,
            observed_rate: positive("observed_rate", observed_rate)?,
            sigma_rel: positive("sigma_rel", sigma_rel)?,
        })
    }
}

/// Base-pair rate multipliers and the base-pair make-up of each designer alphabet.
///
/// An alphabet's overall factor is the harmonic combination
/// `1 / sum(share / multiplier)`, since per-pair times add.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormalizationTable {
    multipliers: BTreeMap<String, f64>,
    compositions: BTreeMap<usize, Vec<(String, f64)>>,
}

impl Default for RenormalizationTable {
    fn default() -> Self {
        let pairs = |v: &[(&str, f64)]| v.iter().map(|(k, s)| ((*k).to_owned(), *s)).collect::<Vec<_>>();
        let compositions = BTreeMap::from([
            (1, pairs(&[("AT", 1.0)])),
            (2, pairs(&[("AT", 1.0)])),
            (3, pairs(&[("AT", 1.0 / 3.0), ("CG", 2.0 / 3.0)])),
            (4, pairs(&[("AT", 0.5), ("CG", 0.5)])),
        ]);
        Self { multipliers: BTreeMap::new(), compositions }
    }
}

impl RenormalizationTable {
    pub fn with_multiplier(mut self, pair: impl Into<String>, multiplier: f64) -> Result<Self> {
        self.multipliers.insert(pair.into(), positive("rate multiplier", multiplier)?);
        Ok(self)
    }

    /// Overrides the base-pair shares of alphabet `a`; shares must sum to one.
    pub fn with_composition(mut self, a: usize, shares: Vec<(String, f64)>) -> Result<Self> {
        if shares.is_empty() {
            return Err(Error::Empty("base-pair composition"));
        }
        let mut total = 0.0;
        for (_, share) in &shares {
            total += probability("base-pair share", *share)?;
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!("base-pair shares for a={a} sum to {total}, not 1")));
        }
        self.compositions.insert(a, shares);
        Ok(self)
    }

    pub fn multiplier(&self, pair: &str) -> f64 {
        self.multipliers.get(pair).copied().unwrap_or(1.0)
    }

    /// Overall rate factor for alphabet `a` (1 when no composition is known).
    pub fn factor(&self, a: usize) -> f64 {
        match self.compositions.get(&a) {
            None => 1.0,
            Some(shares) => 1.0 / shares.iter().map(|(pair, s)| s / self.multiplier(pair)).sum::<f64>(),
        }
    }

    /// Divides each sample's rate by its alphabet's factor.
    pub fn normalize(&self, samples: &[RateSample]) -> Vec<RateSample> {
        samples
            .iter()
            .map(|s| RateSample { observed_rate: s.observed_rate / self.factor(s.a), ..s.clone() })
            .collect()
    }
}

/// Parameters of a synthetic rate experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentDesign {
    pub curve: RateCurve,
    /// Rate scale `c`.
    pub scale: f64,
    pub a_values: Vec<usize>,
    pub repeats_per_a: usize,
    pub sigma_rel: f64,
}

impl ExperimentDesign {
    pub fn new(curve: impl Into<RateCurve>, scale: f64, a_values: Vec<usize>, repeats_per_a: usize, sigma_rel: f64) -> Self {
        Self { curve: curve.into(), scale, a_values, repeats_per_a, sigma_rel }
    }

    fn validate(&self) -> Result<()> {
        positive("scale", self.scale)?;
        positive("sigma_rel", self.sigma_rel)?;
        if self.a_values.is_empty() {
            return Err(Error::Empty("alphabet size list"));
        }
        if let Some(&a) = self.a_values.iter().find(|a| !DESIGNER_ALPHABETS.contains(a)) {
            return Err(Error::AlphabetOutOfRange { a, min: 1, max: 4 });
        }
        if self.repeats_per_a == 0 {
            return Err(Error::NoReplicates);
        }
        if let RateCurve::Mixed { weight } = self.curve {
            probability("mixing weight", weight)?;
        }
        Ok(())
    }
}

/// `rate * (1 + eps)`, `eps ~ N(0, sigma)` redrawn until the factor is positive.
fn perturb(rng: &mut SimRng, rate: f64, sigma: f64) -> f64 {
    loop {
        let eps: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
        if 1.0 + eps > 0.0 {
            return rate * (1.0 + eps);
        }
    }
}

/// Synthesises noisy rate measurements, ordered by `a_values` then repeat.
pub fn generate_experiment(
    design: &ExperimentDesign,
    renorm: &RenormalizationTable,
    seed: u64,
) -> Result<Vec<RateSample>> {
    design.validate()?;
    let mut rng = replicate_rng(seed, Stream::Experiment, 0);
    let mut samples = Vec::with_capacity(design.a_values.len() * design.repeats_per_a);
    for &a in &design.a_values {
        let truth = design.scale * design.curve.shape(a) * renorm.factor(a);
        for _ in 0..design.repeats_per_a {
            samples.push(RateSample {
                a,
                observed_rate: perturb(&mut rng, truth, design.sigma_rel),
                sigma_rel: design.sigma_rel,
            });
        }
    }
    Ok(samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFit {
    pub scale: f64,
    /// Minimised `sum(((obs - pred) / (sigma * pred))^2)`.
    pub residual_sum: f64,
}

/// Closed-form weighted fit of `c * shape(a)`.
///
/// With `u = obs / shape(a)` each term is `(u/c - 1)^2 / sigma^2`, which is
/// quadratic in `1/c`.
fn fit_shape(samples: &[RateSample], shape: impl Fn(usize) -> f64) -> ScaleFit {
    let (mut su, mut suu) = (0.0, 0.0);
    for s in samples {
        let w = 1.0 / (s.sigma_rel * s.sigma_rel);
        let u = s.observed_rate / shape(s.a);
        su += w * u;
        suu += w * u * u;
    }
    let inv_scale = su / suu;
    let residual_sum = samples
        .iter()
        .map(|s| {
            let r = s.observed_rate / shape(s.a) * inv_scale - 1.0;
            r * r / (s.sigma_rel * s.sigma_rel)
        })
        .sum();
    ScaleFit { scale: 1.0 / inv_scale, residual_sum }
}

pub fn fit_rate_model(samples: &[RateSample], law: RateLaw) -> Result<ScaleFit> {
    if samples.is_empty() {
        return Err(Error::Empty("rate samples"));
    }
    Ok(fit_shape(samples, |a| law.shape(a)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub chosen_model: RateLaw,
    /// Residual of the quantum fit minus residual of the classical fit.
    pub statistic: f64,
    pub p_value: f64,
    pub fitted_scale_classical: f64,
    pub fitted_scale_quantum: f64,
    pub bootstrap_b: usize,
    pub seed: u64,
}

fn check_discriminable(samples: &[RateSample], bootstrap_b: usize) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::Empty("rate samples"));
    }
    let distinct: BTreeSet<usize> = samples.iter().map(|s| s.a).collect();
    if distinct.len() < 2 {
        return Err(Error::SingleAlphabet);
    }
    if bootstrap_b < MIN_BOOTSTRAP {
        return Err(Error::TooFewBootstrap { min: MIN_BOOTSTRAP, got: bootstrap_b });
    }
    Ok(())
}

fn statistic(samples: &[RateSample]) -> (f64, ScaleFit, ScaleFit) {
    let classical = fit_shape(samples, |a| RateLaw::Classical.shape(a));
    let quantum = fit_shape(samples, |a| RateLaw::Quantum.shape(a));
    (quantum.residual_sum - classical.residual_sum, classical, quantum)
}

/// Positive statistics favour the classical law; ties go to the quantum law.
fn preferred_law(statistic: f64) -> RateLaw {
    if statistic > 0.0 {
        RateLaw::Classical
    } else {
        RateLaw::Quantum
    }
}

/// Regenerates `samples` (same alphabets and noise levels) from `scale * curve`.
fn resample(rng: &mut SimRng, samples: &[RateSample], curve: RateCurve, scale: f64) -> Vec<RateSample> {
    samples
        .iter()
        .map(|s| RateSample {
            observed_rate: perturb(rng, scale * curve.shape(s.a), s.sigma_rel),
            ..s.clone()
        })
        .collect()
}

/// Chooses between the classical and quantum rate laws.
///
/// A positive statistic favours the classical law; zero goes to the quantum
/// law. The p-value is the fraction of `bootstrap_b` datasets drawn from the
/// rejected law's fit whose statistic is at least as favourable to the
/// chosen law as the observed one.
pub fn discriminate(samples: &[RateSample], bootstrap_b: usize, seed: u64) -> Result<Verdict> {
    check_discriminable(samples, bootstrap_b)?;
    let (observed, classical, quantum) = statistic(samples);
    let chosen = preferred_law(observed);
    let rejected = chosen.other();
    let rejected_scale = match rejected {
        RateLaw::Classical => classical.scale,
        RateLaw::Quantum => quantum.scale,
    };
    let extreme: usize = (0..bootstrap_b as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = replicate_rng(seed, Stream::Bootstrap, b);
            let synthetic = resample(&mut rng, samples, rejected.into(), rejected_scale);
            let (stat, _, _) = statistic(&synthetic);
            let as_extreme = match chosen {
                RateLaw::Classical => stat >= observed,
                RateLaw::Quantum => stat <= observed,
            };
            usize::from(as_extreme)
        })
        .sum();
    Ok(Verdict {
        chosen_model: chosen,
        statistic: observed,
        p_value: extreme as f64 / bootstrap_b as f64,
        fitted_scale_classical: classical.scale,
        fitted_scale_quantum: quantum.scale,
        bootstrap_b,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerConfig {
    pub law: RateLaw,
    pub sigma_levels: Vec<f64>,
    pub repeats_per_a: usize,
    pub trials: usize,
    pub bootstrap_b: usize,
    pub alpha: f64,
}

impl PowerConfig {
    pub fn new(law: RateLaw, sigma_levels: Vec<f64>, repeats_per_a: usize, trials: usize) -> Self {
        Self { law, sigma_levels, repeats_per_a, trials, bootstrap_b: DEFAULT_BOOTSTRAP, alpha: DEFAULT_ALPHA }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub sigma_rel: f64,
    /// Fraction of trials whose verdict matched the generating law.
    pub fraction_correct: f64,
    /// Binomial standard error of `fraction_correct`.
    pub std_error: f64,
    /// Fraction of trials with a correct verdict and `p_value <= alpha`.
    pub fraction_significant: f64,
    pub trials: usize,
}

/// Verdict accuracy of [`discriminate`] against noise level.
///
/// Each trial generates `repeats_per_a` samples at every designer alphabet
/// (scale 1) and discriminates them. A sigma level of 0 is run at
/// [`NOISELESS_SIGMA`].
pub fn power_curve(config: &PowerConfig, seed: u64) -> Result<Vec<PowerPoint>> {
    if config.trials < MIN_POWER_TRIALS {
        return Err(Error::TooFewTrials { min: MIN_POWER_TRIALS, got: config.trials });
    }
    if config.sigma_levels.is_empty() {
        return Err(Error::Empty("sigma levels"));
    }
    if config.bootstrap_b < MIN_BOOTSTRAP {
        return Err(Error::TooFewBootstrap { min: MIN_BOOTSTRAP, got: config.bootstrap_b });
    }
    probability("alpha", config.alpha)?;
    let renorm = RenormalizationTable::default();
    let mut table = Vec::with_capacity(config.sigma_levels.len());
    for (level, &sigma) in config.sigma_levels.iter().enumerate() {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::NonPositive { name: "sigma level", value: sigma });
        }
        let design = ExperimentDesign::new(
            config.law,
            1.0,
            DESIGNER_ALPHABETS.to_vec(),
            config.repeats_per_a,
            if sigma == 0.0 { NOISELESS_SIGMA } else { sigma },
        );
        let outcomes = (0..config.trials as u64)
            .into_par_iter()
            .map(|t| {
                let trial_seed = sub_seed(seed, Stream::Power, ((level as u64) << 32) | t);
                let samples = generate_experiment(&design, &renorm, trial_seed)?;
                let verdict = discriminate(&samples, config.bootstrap_b, trial_seed)?;
                let correct = verdict.chosen_model == config.law;
                Ok((correct, correct && verdict.p_value <= config.alpha))
            })
            .collect::<Result<Vec<_>>>()?;
        let trials = outcomes.len() as f64;
        let correct = outcomes.iter().filter(|o| o.0).count() as f64 / trials;
        let significant = outcomes.iter().filter(|o| o.1).count() as f64 / trials;
        table.push(PowerPoint {
            sigma_rel: sigma,
            fraction_correct: correct,
            std_error: (correct * (1.0 - correct) / trials).sqrt(),
            fraction_significant: significant,
            trials: outcomes.len(),
        });
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Classical,
    Quantum,
    Intermediate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// Best-fit classical weight `w` of `c (w/a + 1 - w)`.
    pub weight: f64,
    pub scale: f64,
    pub residual_mixed: f64,
    pub residual_classical: f64,
    pub residual_quantum: f64,
    /// Residual reduction of the mixed fit over the better pure law.
    pub improvement: f64,
    /// Bootstrap `1 - alpha` quantile of that reduction under the better pure law.
    pub improvement_threshold: f64,
    /// Break-even coherence probability for the supplied `t_r / t_d`.
    pub coherence_threshold: f64,
    pub bootstrap_b: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct MixedFit {
    weight: f64,
    fit: ScaleFit,
}

fn fit_mixed(samples: &[RateSample]) -> MixedFit {
    let rss = |w: f64| fit_shape(samples, |a| mixed_shape(w, a)).residual_sum;
    // Coarse grid then golden-section refinement around the best node.
    const NODES: usize = 200;
    let step = 1.0 / NODES as f64;
    let best = (0..=NODES)
        .map(|i| (i, rss(i as f64 * step)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lo = (best as f64 - 1.0).max(0.0) * step;
    let hi = ((best + 1) as f64 * step).min(1.0);
    let refined = golden_section_min(rss, lo, hi, 1e-10);
    let grid_w = best as f64 * step;
    let weight = if rss(refined) <= rss(grid_w) { refined } else { grid_w };
    MixedFit { weight, fit: fit_shape(samples, |a| mixed_shape(weight, a)) }
}

struct RegimeFits {
    classical: ScaleFit,
    quantum: ScaleFit,
    mixed: MixedFit,
}

impl RegimeFits {
    fn new(samples: &[RateSample]) -> Self {
        Self {
            classical: fit_shape(samples, |a| RateLaw::Classical.shape(a)),
            quantum: fit_shape(samples, |a| RateLaw::Quantum.shape(a)),
            mixed: fit_mixed(samples),
        }
    }

    fn nearer(&self) -> (RateLaw, ScaleFit) {
        if self.classical.residual_sum < self.quantum.residual_sum {
            (RateLaw::Classical, self.classical)
        } else {
            (RateLaw::Quantum, self.quantum)
        }
    }

    fn improvement(&self) -> f64 {
        (self.nearer().1.residual_sum - self.mixed.fit.residual_sum).max(0.0)
    }
}

/// Classifies data as classical, quantum, or in between.
///
/// Intermediate requires the fitted weight to fall inside
/// [`INTERMEDIATE_BAND`] and the mixed fit to beat the better pure law by
/// more than the bootstrap `1 - alpha` quantile (alpha = [`DEFAULT_ALPHA`])
/// of that improvement under the pure law.
pub fn imperfect_regime_classifier(
    samples: &[RateSample],
    t_r_over_t_d: f64,
    bootstrap_b: usize,
    seed: u64,
) -> Result<RegimeReport> {
    check_discriminable(samples, bootstrap_b)?;
    let coherence_threshold = coherence_threshold(t_r_over_t_d, 1.0)?;
    let fits = RegimeFits::new(samples);
    let (nearer, nearer_fit) = fits.nearer();
    let improvement = fits.improvement();

    let mut null: Vec<f64> = (0..bootstrap_b as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = replicate_rng(seed, Stream::Regime, b);
            let synthetic = resample(&mut rng, samples, nearer.into(), nearer_fit.scale);
            RegimeFits::new(&synthetic).improvement()
        })
        .collect();
    null.sort_by(f64::total_cmp);
    let rank = ((1.0 - DEFAULT_ALPHA) * bootstrap_b as f64).ceil() as usize;
    let improvement_threshold = null[rank.clamp(1, bootstrap_b) - 1];

    let w = fits.mixed.weight;
    let in_band = (INTERMEDIATE_BAND.0..=INTERMEDIATE_BAND.1).contains(&w);
    let regime = if in_band && improvement > improvement_threshold {
        Regime::Intermediate
    } else {
        match nearer {
            RateLaw::Classical => Regime::Classical,
            RateLaw::Quantum => Regime::Quantum,
        }
    };
    Ok(RegimeReport {
        regime,
        weight: w,
        scale: fits.mixed.fit.scale,
        residual_mixed: fits.mixed.fit.residual_sum,
        residual_classical: fits.classical.residual_sum,
        residual_quantum: fits.quantum.residual_sum,
        improvement,
        improvement_threshold,
        coherence_threshold,
        bootstrap_b,
        seed,
    })
}
