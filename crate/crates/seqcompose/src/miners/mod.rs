//! Frequent-sequence miners and rule derivation.
//!
//! All miners share the same contract: a pattern is frequent when the number
//! of sessions containing it as a subsequence, at the chosen hierarchy level,
//! reaches the percentage threshold. The level-wise and pattern-growth miners
//! return identical frequent sets by construction; the closed miner
//! post-filters the pattern-growth result.

mod apriori;
mod closed;
pub(crate) mod patterngrowth;
mod rules;

pub use apriori::mine_apriori;
pub use closed::mine_closed;
pub use patterngrowth::mine_patterngrowth;
pub use rules::{
    generate_rules, rank_rules, read_rules, rules_from_jsonl, rules_to_jsonl, top_n, write_rules,
    AssociationRule,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{canonical_cmp, min_count_for_pct, support_pct, HierarchyLevel, Pattern};
use crate::types::Session;

/// The mining algorithms the CLI and benchmark grid can name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Apriori,
    PatternGrowth,
    Closed,
    Multilevel,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Apriori => "apriori",
            Algorithm::PatternGrowth => "patterngrowth",
            Algorithm::Closed => "closed",
            Algorithm::Multilevel => "multilevel",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "apriori" => Ok(Algorithm::Apriori),
            "patterngrowth" => Ok(Algorithm::PatternGrowth),
            "closed" => Ok(Algorithm::Closed),
            "multilevel" => Ok(Algorithm::Multilevel),
            other => Err(Error::Config(format!(
                "unknown algorithm {other:?}: expected apriori, patterngrowth, closed or multilevel"
            ))),
        }
    }
}

/// Threshold settings shared by the baseline miners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiningParams {
    pub min_support_pct: f64,
    pub min_confidence_pct: f64,
    pub level: HierarchyLevel,
    /// Optional cap on pattern length; `None` mines to exhaustion.
    pub max_pattern_length: Option<usize>,
}

impl MiningParams {
    pub fn validate(&self) -> Result<()> {
        if !self.min_support_pct.is_finite()
            || self.min_support_pct <= 0.0
            || self.min_support_pct > 100.0
        {
            return Err(Error::Mining(format!(
                "min_support_pct must be in (0, 100], got {} (0 would make every \
                 subsequence a pattern)",
                self.min_support_pct
            )));
        }
        if !self.min_confidence_pct.is_finite()
            || !(0.0..=100.0).contains(&self.min_confidence_pct)
        {
            return Err(Error::Mining(format!(
                "min_confidence_pct must be in [0, 100], got {}",
                self.min_confidence_pct
            )));
        }
        if matches!(self.max_pattern_length, Some(cap) if cap < 2) {
            return Err(Error::Mining(
                "max_pattern_length must be at least 2 when set".into(),
            ));
        }
        Ok(())
    }
}

/// Work counters reported next to every frequent set.
///
/// `candidate_count` means "patterns whose support was evaluated": for the
/// level-wise miner that is every survivor of the join-and-prune step plus
/// the distinct single items, for pattern growth every projected-database
/// expansion explored. `rule_count` is filled in by rule generation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiningStats {
    pub candidate_count: usize,
    pub frequent_count: usize,
    pub rule_count: usize,
}

/// The outcome of a mining run: every frequent pattern, canonically ordered
/// (length ascending, then item-wise lexicographic), plus work counters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequentSet {
    pub level: HierarchyLevel,
    pub total_sessions: usize,
    pub patterns: Vec<Pattern>,
    pub stats: MiningStats,
}

impl FrequentSet {
    /// Looks up the support count of an exact item sequence.
    pub fn support_of(&self, items: &[String]) -> Option<usize> {
        self.patterns
            .iter()
            .find(|p| p.items == items)
            .map(|p| p.support_count)
    }
}

/// Runs the named baseline miner. The multilevel pipeline has its own entry
/// point (`multilevel::recommend`) because it needs more than thresholds.
pub fn mine(algorithm: Algorithm, sessions: &[Session], params: &MiningParams) -> Result<FrequentSet> {
    match algorithm {
        Algorithm::Apriori => mine_apriori(sessions, params),
        Algorithm::PatternGrowth => mine_patterngrowth(sessions, params),
        Algorithm::Closed => mine_closed(sessions, params),
        Algorithm::Multilevel => Err(Error::Mining(
            "the multilevel pipeline is driven by multilevel::recommend, not a flat miner".into(),
        )),
    }
}

/// Sessions projected to one hierarchy level, with items interned to dense
/// ids in order of first appearance.
pub(crate) struct ProjectedLog {
    pub level: HierarchyLevel,
    pub labels: Vec<String>,
    pub sessions: Vec<Vec<u32>>,
}

impl ProjectedLog {
    pub fn build(sessions: &[Session], level: HierarchyLevel) -> Self {
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let projected = sessions
            .iter()
            .map(|session| {
                crate::pattern::project(session, level)
                    .into_iter()
                    .map(|label| {
                        *ids.entry(label.clone()).or_insert_with(|| {
                            labels.push(label);
                            (labels.len() - 1) as u32
                        })
                    })
                    .collect()
            })
            .collect();
        ProjectedLog {
            level,
            labels,
            sessions: projected,
        }
    }

    pub fn total(&self) -> usize {
        self.sessions.len()
    }

    /// One bit per session, set when the session contains the item at all.
    /// Used to narrow subsequence checks to plausible sessions.
    pub fn item_bitsets(&self) -> Vec<Vec<u64>> {
        let words = self.total().div_ceil(64);
        let mut sets = vec![vec![0u64; words]; self.labels.len()];
        for (s, session) in self.sessions.iter().enumerate() {
            for &item in session {
                sets[item as usize][s / 64] |= 1 << (s % 64);
            }
        }
        sets
    }
}

/// Turns interned `(items, count)` pairs into canonically sorted [`Pattern`]s.
pub(crate) fn into_patterns(
    found: Vec<(Vec<u32>, usize)>,
    log: &ProjectedLog,
) -> Vec<Pattern> {
    let total = log.total();
    let mut patterns: Vec<Pattern> = found
        .into_iter()
        .map(|(items, count)| Pattern {
            level: log.level,
            items: items
                .into_iter()
                .map(|id| log.labels[id as usize].clone())
                .collect(),
            support_count: count,
            support_pct: support_pct(count, total),
        })
        .collect();
    patterns.sort_by(|a, b| canonical_cmp(&a.items, &b.items));
    patterns
}

/// Shared threshold computation: smallest count that clears the percentage.
pub(crate) fn absolute_threshold(params: &MiningParams, total: usize) -> usize {
    min_count_for_pct(params.min_support_pct, total)
}
