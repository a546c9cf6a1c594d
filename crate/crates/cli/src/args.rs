//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use repliq_core::discrimination::{DEFAULT_ALPHA, DEFAULT_BOOTSTRAP};

use crate::config::{
    CommandConfig, DiscriminateConfig, GenerateConfig, IsotopeConfig, LawArg, ModeArg, OutputFormat, PairMultipliers,
    PowerRunConfig, RunConfig, SimulateConfig, SimulationKind,
};
use crate::csvio::read_rate_samples;
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "repliq", version, about = "Classical vs quantum models of template-directed chain assembly")]
pub struct Cli {
    /// Master seed for every random stream of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file (standard output when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `json` writes the full run record, `csv` only the results table.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical and quantum time coefficients for a range of alphabet sizes.
    Coefficients { a_min: usize, a_max: usize },
    /// Assembly time of one chain, classical or quantum.
    Simulate(SimulateArgs),
    /// Classical-vs-quantum verdict for measured rates (CSV: a,observed_rate,sigma_rel).
    Discriminate(DiscriminateArgs),
    /// Verdict accuracy against measurement noise.
    Power(PowerArgs),
    /// Isotope-tag separation under chemical-group exchange.
    Isotope(IsotopeArgs),
    /// Break-even coherence probability for imperfect quantum assembly.
    Threshold {
        #[arg(long)]
        t_r: f64,
        #[arg(long)]
        t_d: f64,
    },
    /// Synthetic rate measurements in the discriminate input schema.
    Generate(GenerateArgs),
    /// Re-run a JSON run record and check its results are reproduced exactly.
    Replay { record: PathBuf },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub kind: SimulationKind,
    #[arg(long)]
    pub a: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t_d: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_r: f64,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    /// Probability an attempt is not disrupted (quantum-imperfect only).
    #[arg(long)]
    pub p_coherence: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Idealized)]
    pub mode: ModeArg,
}

fn parse_pair(s: &str) -> std::result::Result<(String, f64), String> {
    let (pair, value) = s.split_once('=').ok_or_else(|| format!("expected PAIR=MULTIPLIER, got `{s}`"))?;
    let value: f64 = value.parse().map_err(|e| format!("bad multiplier in `{s}`: {e}"))?;
    Ok((pair.trim().to_owned(), value))
}

#[derive(Debug, Args)]
pub struct DiscriminateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
    pub bootstrap: usize,
    /// Base-pair rate multiplier to divide out before fitting, e.g. `CG=0.8`.
    #[arg(long = "pair-multiplier", value_parser = parse_pair)]
    pub pair_multipliers: Vec<(String, f64)>,
    /// Also classify classical/intermediate/quantum for this t_r/t_d.
    #[arg(long)]
    pub t_r_over_t_d: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long, value_enum, default_value_t = LawArg::Classical)]
    pub model: LawArg,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [0.0, 0.05, 0.2])]
    pub sigma: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct IsotopeArgs {
    #[arg(long, default_value_t = 4)]
    pub a: usize,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub tagged_fraction: f64,
    #[arg(long)]
    pub exchange_prob: f64,
    /// Share of exchanges that go to the enzyme rather than another base.
    #[arg(long, default_value_t = 0.5)]
    pub enzyme_weight: f64,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = LawArg::Classical)]
    pub model: LawArg,
    /// Classical weight w of the mixed curve w/a + (1 - w); overrides --model.
    #[arg(long)]
    pub mixed_weight: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
    pub a_values: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0.05)]
    pub sigma: f64,
    #[arg(long = "pair-multiplier", value_parser = parse_pair)]
    pub pair_multipliers: Vec<(String, f64)>,
}

impl Cli {
    /// Builds the run configuration; `None` for `replay`, which has none of its own.
    pub fn into_config(self) -> Result<Option<RunConfig>> {
        let command = match self.command {
            Command::Coefficients { a_min, a_max } => CommandConfig::Coefficients { a_min, a_max },
            Command::Simulate(a) => CommandConfig::Simulate(SimulateConfig {
                kind: a.kind,
                a: a.a,
                n: a.n,
                t_d: a.t_d,
                t_r: a.t_r,
                replicates: a.replicates,
                p_coherence: a.p_coherence,
                mode: a.mode,
            }),
            Command::Discriminate(a) => CommandConfig::Discriminate(DiscriminateConfig {
                samples: read_rate_samples(&a.input)?,
                input: a.input,
                bootstrap_b: a.bootstrap,
                pair_multipliers: a.pair_multipliers as PairMultipliers,
                t_r_over_t_d: a.t_r_over_t_d,
            }),
            Command::Power(a) => CommandConfig::Power(PowerRunConfig {
                law: a.model,
                sigma_levels: a.sigma,
                repeats_per_a: a.repeats,
                trials: a.trials,
                bootstrap_b: a.bootstrap,
                alpha: a.alpha,
            }),
            Command::Isotope(a) => CommandConfig::Isotope(IsotopeConfig {
                a: a.a,
                n: a.n,
                tagged_fraction: a.tagged_fraction,
                exchange_prob: a.exchange_prob,
                enzyme_weight: a.enzyme_weight,
                replicates: a.replicates,
            }),
            Command::Threshold { t_r, t_d } => CommandConfig::Threshold { t_r, t_d },
            Command::Generate(a) => CommandConfig::Generate(GenerateConfig {
                law: a.model,
                mixed_weight: a.mixed_weight,
                scale: a.scale,
                a_values: a.a_values,
                repeats_per_a: a.repeats,
                sigma_rel: a.sigma,
                pair_multipliers: a.pair_multipliers,
            }),
            Command::Replay { .. } => return Ok(None),
        };
        Ok(Some(RunConfig { master_seed: self.seed, output_path: self.out, output_format: self.format, command }))
    }
}
