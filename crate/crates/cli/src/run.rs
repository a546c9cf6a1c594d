//! Executing a [`RunConfig`], the run record written for it, and replay.

use chrono::{SecondsFormat, Utc};
use repliq_core::grover::{attempt_blocks, iterations_required};
use repliq_core::{
    classical_coefficient, coherence_threshold, discriminate, expected_classical_time, generate_experiment,
    imperfect_regime_classifier, make_alphabet, power_curve, quantum_assembly_time, run_tagged_assembly,
    separation_fraction, simulate_classical, simulate_imperfect_quantum, ChainTask, ExchangeConfig,
    ExperimentDesign, PowerConfig, PowerPoint, RateSample, RegimeReport, TagReport, Verdict, RNG_ALGORITHM,
};
use serde::{Deserialize, Serialize};

use crate::config::{renormalization, CommandConfig, RunConfig, SimulateConfig, SimulationKind};
use crate::csvio::{fmt_f64, write_rate_samples, Table};
use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = concat!("repliq ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub a: usize,
    /// `a / ln a`: classical time in units of `t_d ln N`.
    pub classical_coefficient: f64,
    pub iterations: usize,
    /// Ideal quantum time in units of `t_r ln N`.
    pub quantum_coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutcome {
    pub kind: SimulationKind,
    pub a: usize,
    pub n: usize,
    pub ln_information: f64,
    pub total_time: f64,
    pub attempts_per_base: f64,
    /// Analytic mean of `total_time`.
    pub expected_time: f64,
    /// `total_time / ln N`; absent for a single-type alphabet (`ln N = 0`).
    pub time_per_nat: Option<f64>,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationOutcome {
    pub verdict: Verdict,
    pub regime: Option<RegimeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopeOutcome {
    pub report: TagReport,
    pub separation_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOutcome {
    pub t_r: f64,
    pub t_d: f64,
    pub threshold: f64,
    /// Largest `t_r / t_d` for which the threshold stays below one.
    pub max_t_r_over_t_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Results {
    Coefficients { rows: Vec<CoefficientRow> },
    Simulation(SimulationOutcome),
    Discrimination(DiscriminationOutcome),
    Power { points: Vec<PowerPoint> },
    Isotope(IsotopeOutcome),
    Threshold(ThresholdOutcome),
    Samples { samples: Vec<RateSample> },
}

/// Column order of every CSV this tool writes.
pub mod columns {
    pub const COEFFICIENTS: [&str; 4] = ["a", "classical_coefficient", "iterations", "quantum_coefficient"];
    pub const SIMULATION: [&str; 10] = [
        "kind",
        "a",
        "n",
        "ln_information",
        "total_time",
        "attempts_per_base",
        "expected_time",
        "time_per_nat",
        "replicates",
        "seed",
    ];
    pub const DISCRIMINATION: [&str; 11] = [
        "chosen_model",
        "statistic",
        "p_value",
        "fitted_scale_classical",
        "fitted_scale_quantum",
        "bootstrap_b",
        "seed",
        "regime",
        "weight",
        "improvement",
        "improvement_threshold",
    ];
    pub const POWER: [&str; 5] = ["sigma_rel", "fraction_correct", "std_error", "fraction_significant", "trials"];
    pub const ISOTOPE: [&str; 9] = [
        "total_tagged_incorporations",
        "separated_count",
        "separation_fraction",
        "same_base",
        "other_base_in_strand",
        "enzyme_pool",
        "tags_conserved",
        "replicates",
        "seed",
    ];
    pub const THRESHOLD: [&str; 4] = ["t_r", "t_d", "threshold", "max_t_r_over_t_d"];
}

fn kind_label(kind: SimulationKind) -> &'static str {
    match kind {
        SimulationKind::Classical => "classical",
        SimulationKind::QuantumIdeal => "quantum-ideal",
        SimulationKind::QuantumImperfect => "quantum-imperfect",
    }
}

impl Results {
    pub fn to_csv(&self) -> String {
        match self {
            Results::Coefficients { rows } => {
                let mut t = Table::new(&columns::COEFFICIENTS);
                for r in rows {
                    t.row([r.a.to_string(), fmt_f64(r.classical_coefficient), r.iterations.to_string(), fmt_f64(r.quantum_coefficient)]);
                }
                t.finish()
            }
            Results::Simulation(s) => {
                let mut t = Table::new(&columns::SIMULATION);
                t.row([
                    kind_label(s.kind).to_owned(),
                    s.a.to_string(),
                    s.n.to_string(),
                    fmt_f64(s.ln_information),
                    fmt_f64(s.total_time),
                    fmt_f64(s.attempts_per_base),
                    fmt_f64(s.expected_time),
                    s.time_per_nat.map(fmt_f64).unwrap_or_default(),
                    s.replicates.to_string(),
                    s.seed.to_string(),
                ]);
                t.finish()
            }
            Results::Discrimination(d) => {
                let v = &d.verdict;
                let mut cells = vec![
                    format!("{:?}", v.chosen_model),
                    fmt_f64(v.statistic),
                    fmt_f64(v.p_value),
                    fmt_f64(v.fitted_scale_classical),
                    fmt_f64(v.fitted_scale_quantum),
                    v.bootstrap_b.to_string(),
                    v.seed.to_string(),
                ];
                match &d.regime {
                    Some(r) => cells.extend([
                        format!("{:?}", r.regime),
                        fmt_f64(r.weight),
                        fmt_f64(r.improvement),
                        fmt_f64(r.improvement_threshold),
                    ]),
                    None => cells.extend(std::iter::repeat_n(String::new(), 4)),
                }
                let mut t = Table::new(&columns::DISCRIMINATION);
                t.row(cells);
                t.finish()
            }
            Results::Power { points } => {
                let mut t = Table::new(&columns::POWER);
                for p in points {
                    t.row([
                        fmt_f64(p.sigma_rel),
                        fmt_f64(p.fraction_correct),
                        fmt_f64(p.std_error),
                        fmt_f64(p.fraction_significant),
                        p.trials.to_string(),
                    ]);
                }
                t.finish()
            }
            Results::Isotope(o) => {
                let r = &o.report;
                let mut t = Table::new(&columns::ISOTOPE);
                t.row([
                    r.total_tagged_incorporations.to_string(),
                    r.separated_count.to_string(),
                    fmt_f64(o.separation_fraction),
                    r.destinations.same_base.to_string(),
                    r.destinations.other_base_in_strand.to_string(),
                    r.destinations.enzyme_pool.to_string(),
                    r.tags_conserved.to_string(),
                    r.replicates.to_string(),
                    r.seed.to_string(),
                ]);
                t.finish()
            }
            Results::Threshold(o) => {
                let mut t = Table::new(&columns::THRESHOLD);
                t.row([fmt_f64(o.t_r), fmt_f64(o.t_d), fmt_f64(o.threshold), fmt_f64(o.max_t_r_over_t_d)]);
                t.finish()
            }
            Results::Samples { samples } => write_rate_samples(samples),
        }
    }
}

pub fn coefficient_table(a_min: usize, a_max: usize) -> Result<Vec<CoefficientRow>> {
    (a_min..=a_max)
        .map(|a| {
            Ok(CoefficientRow {
                a,
                classical_coefficient: classical_coefficient(a as f64)?,
                iterations: iterations_required(a)?,
                quantum_coefficient: attempt_blocks(a)? as f64 / (a as f64).ln(),
            })
        })
        .collect()
}

fn simulate(cfg: &SimulateConfig, seed: u64) -> Result<SimulationOutcome> {
    let alphabet = make_alphabet(cfg.a, None)?;
    let task = ChainTask::random(&alphabet, cfg.n, seed)?;
    let timing = cfg.timing()?;
    let ln_information = task.ln_information();
    let (total_time, attempts_per_base, expected_time, replicates) = match cfg.kind {
        SimulationKind::Classical => {
            let res = simulate_classical(&alphabet, &task, &timing, seed, cfg.replicates)?;
            (res.total_time, res.attempts_per_base, expected_classical_time(&alphabet, &task, &timing), res.replicates)
        }
        SimulationKind::QuantumIdeal => {
            let t = quantum_assembly_time(cfg.a, cfg.n, timing.t_r())?;
            (t, 1.0, t, 1)
        }
        SimulationKind::QuantumImperfect => {
            let q = cfg.quantum_config()?;
            let res = simulate_imperfect_quantum(&alphabet, &task, &timing, &q, seed, cfg.replicates)?;
            let expected = quantum_assembly_time(cfg.a, cfg.n, timing.t_r())? / q.effective_success(cfg.a)?;
            (res.total_time, res.attempts_per_base, expected, res.replicates)
        }
    };
    Ok(SimulationOutcome {
        kind: cfg.kind,
        a: cfg.a,
        n: cfg.n,
        ln_information,
        total_time,
        attempts_per_base,
        expected_time,
        time_per_nat: (ln_information > 0.0).then(|| total_time / ln_information),
        replicates,
        seed,
    })
}

/// Validates and runs `config`, returning its results payload.
pub fn execute(config: &RunConfig) -> Result<Results> {
    config.validate()?;
    let seed = config.master_seed;
    Ok(match &config.command {
        CommandConfig::Coefficients { a_min, a_max } => Results::Coefficients { rows: coefficient_table(*a_min, *a_max)? },
        CommandConfig::Simulate(cfg) => Results::Simulation(simulate(cfg, seed)?),
        CommandConfig::Discriminate(cfg) => {
            let samples = renormalization(&cfg.pair_multipliers)?.normalize(&cfg.samples);
            let verdict = discriminate(&samples, cfg.bootstrap_b, seed)?;
            let regime = cfg
                .t_r_over_t_d
                .map(|r| imperfect_regime_classifier(&samples, r, cfg.bootstrap_b, seed))
                .transpose()?;
            Results::Discrimination(DiscriminationOutcome { verdict, regime })
        }
        CommandConfig::Power(cfg) => {
            let power = PowerConfig {
                law: cfg.law.into(),
                sigma_levels: cfg.sigma_levels.clone(),
                repeats_per_a: cfg.repeats_per_a,
                trials: cfg.trials,
                bootstrap_b: cfg.bootstrap_b,
                alpha: cfg.alpha,
            };
            Results::Power { points: power_curve(&power, seed)? }
        }
        CommandConfig::Isotope(cfg) => {
            let alphabet = make_alphabet(cfg.a, None)?;
            let task = ChainTask::random(&alphabet, cfg.n, seed)?;
            let exchange = ExchangeConfig::new(cfg.exchange_prob, cfg.enzyme_weight)?;
            let report = run_tagged_assembly(&alphabet, &task, cfg.tagged_fraction, &exchange, seed, cfg.replicates)?;
            let separation_fraction = separation_fraction(&report)?;
            Results::Isotope(IsotopeOutcome { report, separation_fraction })
        }
        CommandConfig::Threshold { t_r, t_d } => Results::Threshold(ThresholdOutcome {
            t_r: *t_r,
            t_d: *t_d,
            threshold: coherence_threshold(*t_r, *t_d)?,
            max_t_r_over_t_d: 1.0 / coherence_threshold(1.0, 1.0)?,
        }),
        CommandConfig::Generate(cfg) => {
            let design = ExperimentDesign::new(cfg.curve(), cfg.scale, cfg.a_values.clone(), cfg.repeats_per_a, cfg.sigma_rel);
            let samples = generate_experiment(&design, &renormalization(&cfg.pair_multipliers)?, seed)?;
            Results::Samples { samples }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    pub command: String,
    pub config_echo: RunConfig,
    pub rng_algorithm: String,
    pub master_seed: u64,
    pub started: String,
    pub finished: String,
    pub results: Results,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunRecord {
    pub fn run(config: RunConfig) -> Result<Self> {
        let started = now();
        let results = execute(&config)?;
        Ok(Self {
            tool_version: TOOL_VERSION.to_owned(),
            command: config.command.name().to_owned(),
            master_seed: config.master_seed,
            config_echo: config,
            rng_algorithm: RNG_ALGORITHM.to_owned(),
            started,
            finished: now(),
            results,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// The record with wall-clock timestamps cleared; everything else is a
    /// pure function of the configuration.
    pub fn without_timestamps(&self) -> Self {
        Self { started: String::new(), finished: String::new(), ..self.clone() }
    }

    pub fn render(&self) -> Result<String> {
        match self.config_echo.output_format {
            crate::config::OutputFormat::Json => self.to_json(),
            crate::config::OutputFormat::Csv => Ok(self.results.to_csv()),
        }
    }
}

/// Re-executes a record's configuration and checks the results are
/// byte-identical to the recorded ones.
pub fn replay(record: &RunRecord) -> Result<RunRecord> {
    let mut config = record.config_echo.clone();
    config.master_seed = record.master_seed;
    let fresh = RunRecord::run(config)?;
    let recorded = serde_json::to_vec(&record.without_timestamps())?;
    let replayed = serde_json::to_vec(&fresh.without_timestamps())?;
    if recorded != replayed {
        return Err(CliError::ReplayMismatch);
    }
    Ok(fresh)
}
