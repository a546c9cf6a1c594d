//! Isotope-tag bookkeeping for chemical-group exchange during assembly.
//!
//! A tagged base carries one isotope label on its large (shared) atom group
//! and a matching label on its small (identifying) group. If incorporation
//! exchanges the small group with another base or with the enzyme, the two
//! labels end up in different molecules.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::check_inputs;
use crate::error::{probability, Error, Result};
use crate::model::{AlphabetSpec, ChainTask};
use crate::rng::{replicate_rng, Stream};

pub type TagId = u64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedBase {
    pub base_index: usize,
    pub large_tag: Option<TagId>,
    pub small_tag: Option<TagId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExchangePartner {
    OtherBase,
    Enzyme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeConfig {
    /// Probability that an incorporation exchanges the small group.
    pub exchange_prob: f64,
    /// Probability that an exchange goes to the enzyme rather than another base.
    pub enzyme_weight: f64,
}

impl ExchangeConfig {
    pub fn new(exchange_prob: f64, enzyme_weight: f64) -> Result<Self> {
        let cfg = Self { exchange_prob, enzyme_weight };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        probability("exchange_prob", self.exchange_prob)?;
        probability("enzyme_weight", self.enzyme_weight)?;
        Ok(())
    }
}

/// Where each small-group tag finished.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Destinations {
    pub same_base: u64,
    pub other_base_in_strand: u64,
    pub enzyme_pool: u64,
}

impl Destinations {
    pub fn total(&self) -> u64 {
        self.same_base + self.other_base_in_strand + self.enzyme_pool
    }

    fn add(&mut self, other: &Self) {
        self.same_base += other.same_base;
        self.other_base_in_strand += other.other_base_in_strand;
        self.enzyme_pool += other.enzyme_pool;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagReport {
    pub total_tagged_incorporations: u64,
    pub separated_count: u64,
    pub destinations: Destinations,
    /// Every created tag was found exactly once on each group.
    pub tags_conserved: bool,
    pub seed: u64,
    pub replicates: usize,
}

/// Final molecular state of one tagged assembly.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TaggedAssembly {
    /// The newly built strand, in template order.
    pub strand: Vec<TaggedBase>,
    /// Environment bases that received an exchanged small group and were
    /// later built into the strand.
    pub partner_bases: Vec<TaggedBase>,
    /// Small-group tags held by the enzyme.
    pub enzyme_pool: Vec<TagId>,
    /// Tag ids in creation order.
    pub created: Vec<TagId>,
}

impl TaggedAssembly {
    /// Counts small-tag destinations and separations.
    pub fn destinations(&self) -> (Destinations, u64) {
        let mut d = Destinations::default();
        for base in &self.strand {
            if let Some(large) = base.large_tag {
                if base.small_tag == Some(large) {
                    d.same_base += 1;
                }
            }
        }
        d.other_base_in_strand = self.partner_bases.iter().filter(|b| b.small_tag.is_some()).count() as u64;
        d.enzyme_pool = self.enzyme_pool.len() as u64;
        let separated = d.other_base_in_strand + d.enzyme_pool;
        (d, separated)
    }

    /// Whether every created tag appears exactly once as a large group and
    /// exactly once as a small group, and nothing else appears.
    pub fn tags_conserved(&self) -> bool {
        let mut large: Vec<TagId> = self.strand.iter().filter_map(|b| b.large_tag).collect();
        let mut small: Vec<TagId> = self
            .strand
            .iter()
            .chain(&self.partner_bases)
            .filter_map(|b| b.small_tag)
            .chain(self.enzyme_pool.iter().copied())
            .collect();
        let mut created = self.created.clone();
        large.sort_unstable();
        small.sort_unstable();
        created.sort_unstable();
        large == created && small == created
    }
}

/// Assembles one copy of `task`, tagging and exchanging as configured.
///
/// Tag ids are `(replicate << 40) | k`, unique across a run.
pub fn tagged_assembly_replicate(
    task: &ChainTask,
    tagged_fraction: f64,
    config: &ExchangeConfig,
    seed: u64,
    replicate: u64,
) -> TaggedAssembly {
    let mut rng = replicate_rng(seed, Stream::Isotope, replicate);
    let a = task.alphabet_size();
    let mut out = TaggedAssembly { strand: Vec::with_capacity(task.len()), ..Default::default() };
    let mut next_id = replicate << 40;
    for &base_index in task.target() {
        let mut base = TaggedBase { base_index, large_tag: None, small_tag: None };
        if rng.random_bool(tagged_fraction) {
            let id = next_id;
            next_id += 1;
            out.created.push(id);
            base.large_tag = Some(id);
            base.small_tag = Some(id);
            if rng.random_bool(config.exchange_prob) {
                // The partner's untagged small group replaces ours.
                base.small_tag = None;
                let partner = if rng.random_bool(config.enzyme_weight) {
                    ExchangePartner::Enzyme
                } else {
                    ExchangePartner::OtherBase
                };
                match partner {
                    ExchangePartner::Enzyme => out.enzyme_pool.push(id),
                    ExchangePartner::OtherBase => out.partner_bases.push(TaggedBase {
                        base_index: rng.random_range(0..a),
                        large_tag: None,
                        small_tag: Some(id),
                    }),
                }
            }
        }
        out.strand.push(base);
    }
    out
}

/// Runs `replicates` tagged assemblies and pools their tag outcomes.
pub fn run_tagged_assembly(
    alphabet: &AlphabetSpec,
    task: &ChainTask,
    tagged_fraction: f64,
    config: &ExchangeConfig,
    seed: u64,
    replicates: usize,
) -> Result<TagReport> {
    check_inputs(alphabet, task, replicates)?;
    config.validate()?;
    if !(tagged_fraction > 0.0 && tagged_fraction <= 1.0) {
        return Err(Error::Invalid(format!("tagged_fraction must lie in (0, 1], got {tagged_fraction}")));
    }
    let per_replicate: Vec<(Destinations, u64, bool)> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let run = tagged_assembly_replicate(task, tagged_fraction, config, seed, r);
            let (d, separated) = run.destinations();
            (d, separated, run.tags_conserved())
        })
        .collect();
    let mut destinations = Destinations::default();
    let mut separated_count = 0;
    let mut tags_conserved = true;
    for (d, s, ok) in &per_replicate {
        destinations.add(d);
        separated_count += s;
        tags_conserved &= ok;
    }
    Ok(TagReport {
        total_tagged_incorporations: destinations.total(),
        separated_count,
        destinations,
        tags_conserved,
        seed,
        replicates,
    })
}

/// Fraction of tagged incorporations whose two tags were separated.
pub fn separation_fraction(report: &TagReport) -> Result<f64> {
    if report.total_tagged_incorporations == 0 {
        return Err(Error::Empty("tagged incorporations"));
    }
    Ok(report.separated_count as f64 / report.total_tagged_incorporations as f64)
}
