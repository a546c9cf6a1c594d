//! Run configuration: one parameter set per subcommand plus the common
//! seed and output settings. The whole struct is echoed into every
//! [`RunRecord`](crate::run::RunRecord) so a run can be replayed from it.

use std::path::PathBuf;

use repliq_core::discrimination::{DEFAULT_ALPHA, DEFAULT_BOOTSTRAP, DESIGNER_ALPHABETS, MIN_BOOTSTRAP, MIN_POWER_TRIALS};
use repliq_core::grover::MAX_CONSTANT_RATE_ALPHABET;
use repliq_core::{
    make_alphabet, ExchangeConfig, ImperfectQuantumConfig, QuantumMode, RateCurve, RateLaw, RateSample,
    RenormalizationTable, TimingParams,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SimulationKind {
    Classical,
    QuantumIdeal,
    QuantumImperfect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LawArg {
    Classical,
    Quantum,
}

impl From<LawArg> for RateLaw {
    fn from(law: LawArg) -> Self {
        match law {
            LawArg::Classical => RateLaw::Classical,
            LawArg::Quantum => RateLaw::Quantum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    Idealized,
    Physical,
}

impl From<ModeArg> for QuantumMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Idealized => QuantumMode::Idealized,
            ModeArg::Physical => QuantumMode::Physical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub command: CommandConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum CommandConfig {
    Coefficients { a_min: usize, a_max: usize },
    Simulate(SimulateConfig),
    Discriminate(DiscriminateConfig),
    Power(PowerRunConfig),
    Isotope(IsotopeConfig),
    Threshold { t_r: f64, t_d: f64 },
    Generate(GenerateConfig),
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Coefficients { .. } => "coefficients",
            CommandConfig::Simulate(_) => "simulate",
            CommandConfig::Discriminate(_) => "discriminate",
            CommandConfig::Power(_) => "power",
            CommandConfig::Isotope(_) => "isotope",
            CommandConfig::Threshold { .. } => "threshold",
            CommandConfig::Generate(_) => "generate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub kind: SimulationKind,
    pub a: usize,
    pub n: usize,
    pub t_d: f64,
    pub t_r: f64,
    pub replicates: usize,
    pub p_coherence: Option<f64>,
    pub mode: ModeArg,
}

impl SimulateConfig {
    pub fn timing(&self) -> Result<TimingParams> {
        Ok(TimingParams::new(self.t_d, self.t_r)?)
    }

    pub fn quantum_config(&self) -> Result<ImperfectQuantumConfig> {
        let p = self
            .p_coherence
            .ok_or_else(|| CliError::Validation("quantum-imperfect requires --p-coherence".into()))?;
        Ok(ImperfectQuantumConfig::for_timing(p, &self.timing()?, self.mode.into())?)
    }
}

/// `(base-pair label, rate multiplier)` entries of a renormalisation table.
pub type PairMultipliers = Vec<(String, f64)>;

pub fn renormalization(multipliers: &PairMultipliers) -> Result<RenormalizationTable> {
    let mut table = RenormalizationTable::default();
    for (pair, m) in multipliers {
        table = table.with_multiplier(pair.clone(), *m)?;
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminateConfig {
    /// Where the samples were read from; informational only.
    pub input: PathBuf,
    pub samples: Vec<RateSample>,
    pub bootstrap_b: usize,
    pub pair_multipliers: PairMultipliers,
    /// When set, also runs the imperfect-regime classifier.
    pub t_r_over_t_d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRunConfig {
    pub law: LawArg,
    pub sigma_levels: Vec<f64>,
    pub repeats_per_a: usize,
    pub trials: usize,
    pub bootstrap_b: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopeConfig {
    pub a: usize,
    pub n: usize,
    pub tagged_fraction: f64,
    pub exchange_prob: f64,
    pub enzyme_weight: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub law: LawArg,
    /// Classical weight of a mixed curve; overrides `law` when set.
    pub mixed_weight: Option<f64>,
    pub scale: f64,
    pub a_values: Vec<usize>,
    pub repeats_per_a: usize,
    pub sigma_rel: f64,
    pub pair_multipliers: PairMultipliers,
}

impl GenerateConfig {
    pub fn curve(&self) -> RateCurve {
        match self.mixed_weight {
            Some(weight) => RateCurve::Mixed { weight },
            None => RateLaw::from(self.law).into(),
        }
    }
}

impl Default for PowerRunConfig {
    fn default() -> Self {
        Self {
            law: LawArg::Classical,
            sigma_levels: vec![0.0, 0.05, 0.2],
            repeats_per_a: 10,
            trials: 200,
            bootstrap_b: DEFAULT_BOOTSTRAP,
            alpha: DEFAULT_ALPHA,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn unit_interval(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {x}")))
    }
}

impl RunConfig {
    /// Checks every parameter against the preconditions of the operation it feeds.
    pub fn validate(&self) -> Result<()> {
        match &self.command {
            CommandConfig::Coefficients { a_min, a_max } => {
                if *a_min < 2 || a_min > a_max {
                    return Err(invalid(format!("need 2 <= a_min <= a_max, got {a_min}..{a_max}")));
                }
            }
            CommandConfig::Simulate(cfg) => {
                make_alphabet(cfg.a, None)?;
                if cfg.n == 0 {
                    return Err(invalid("n must be at least 1"));
                }
                if cfg.replicates == 0 {
                    return Err(invalid("replicates must be at least 1"));
                }
                cfg.timing()?;
                if cfg.kind == SimulationKind::QuantumImperfect {
                    if cfg.a > MAX_CONSTANT_RATE_ALPHABET {
                        return Err(invalid(format!("quantum-imperfect supports a <= 4, got {}", cfg.a)));
                    }
                    let q = cfg.quantum_config()?;
                    if q.effective_success(cfg.a)? <= 0.0 {
                        return Err(invalid("p_coherence = 0 never completes an attempt"));
                    }
                }
            }
            CommandConfig::Discriminate(cfg) => {
                let distinct: std::collections::BTreeSet<_> = cfg.samples.iter().map(|s| s.a).collect();
                if distinct.len() < 2 {
                    return Err(invalid("samples must span at least two alphabet sizes"));
                }
                if cfg.bootstrap_b < MIN_BOOTSTRAP {
                    return Err(invalid(format!("bootstrap must be at least {MIN_BOOTSTRAP}")));
                }
                renormalization(&cfg.pair_multipliers)?;
                if let Some(r) = cfg.t_r_over_t_d {
                    if !(r > 0.0 && r.is_finite()) {
                        return Err(invalid(format!("t_r_over_t_d must be positive, got {r}")));
                    }
                }
            }
            CommandConfig::Power(cfg) => {
                if cfg.trials < MIN_POWER_TRIALS {
                    return Err(invalid(format!("trials must be at least {MIN_POWER_TRIALS}")));
                }
                if cfg.sigma_levels.is_empty() || cfg.sigma_levels.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
                    return Err(invalid("sigma levels must be a non-empty list of non-negative numbers"));
                }
                if cfg.repeats_per_a == 0 {
                    return Err(invalid("repeats must be at least 1"));
                }
                if cfg.bootstrap_b < MIN_BOOTSTRAP {
                    return Err(invalid(format!("bootstrap must be at least {MIN_BOOTSTRAP}")));
                }
                unit_interval("alpha", cfg.alpha)?;
            }
            CommandConfig::Isotope(cfg) => {
                make_alphabet(cfg.a, None)?;
                if cfg.n == 0 || cfg.replicates == 0 {
                    return Err(invalid("n and replicates must be at least 1"));
                }
                if !(cfg.tagged_fraction > 0.0 && cfg.tagged_fraction <= 1.0) {
                    return Err(invalid(format!("tagged fraction must lie in (0, 1], got {}", cfg.tagged_fraction)));
                }
                ExchangeConfig::new(cfg.exchange_prob, cfg.enzyme_weight)?;
            }
            CommandConfig::Threshold { t_r, t_d } => {
                TimingParams::new(*t_d, *t_r)?;
            }
            CommandConfig::Generate(cfg) => {
                if cfg.a_values.is_empty() || cfg.a_values.iter().any(|a| !DESIGNER_ALPHABETS.contains(a)) {
                    return Err(invalid("alphabet sizes must be drawn from 1..=4"));
                }
                if !(cfg.sigma_rel > 0.0 && cfg.sigma_rel.is_finite()) {
                    return Err(invalid(format!("sigma must be positive, got {}", cfg.sigma_rel)));
                }
                if !(cfg.scale > 0.0 && cfg.scale.is_finite()) {
                    return Err(invalid(format!("scale must be positive, got {}", cfg.scale)));
                }
                if cfg.repeats_per_a == 0 {
                    return Err(invalid("repeats must be at least 1"));
                }
                if let Some(w) = cfg.mixed_weight {
                    unit_interval("mixing weight", w)?;
                }
                renormalization(&cfg.pair_multipliers)?;
            }
        }
        Ok(())
    }
}
