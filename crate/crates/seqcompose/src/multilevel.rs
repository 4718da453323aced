//! Two-level mining pipeline: service-level screening, log reduction, then
//! operation-level mining and rule-based recommendation.
//!
//! The pipeline exploits the service → operation hierarchy. Level 1 mines
//! the log projected to bare service names (cheap, deduplicated sessions)
//! and keeps only the patterns whose support is strictly above the average
//! over all level-1 candidates. Sessions containing none of the kept
//! patterns are dropped; the surviving sessions — with their full
//! operation-level detail — feed a second mining pass whose percentage
//! threshold is taken of the reduced session count (configurable to the
//! original count for sensitivity checks). Rules from the second pass,
//! ranked by confidence then support, are the recommendations.
//!
//! Work counters are kept per level in the [`StageTrace`]; the aggregate
//! counters on the final [`Recommendation`] sum the two levels, because no
//! single-counter semantics can describe both passes at once.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::miners::patterngrowth::grow;
use crate::miners::{
    generate_rules, into_patterns, rank_rules, top_n, AssociationRule, FrequentSet, MiningStats,
    ProjectedLog,
};
use crate::pattern::{
    is_subsequence, min_count_for_pct, project_service_level, HierarchyLevel, Pattern,
};
use crate::types::Session;

/// Which session count the level-2 percentage threshold is taken of.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdBase {
    /// Percent of the reduced session count (the reduced log is the level-2
    /// input, so its size is the natural denominator).
    #[default]
    Reduced,
    /// Percent of the original session count, for sensitivity comparisons.
    Original,
}

impl std::fmt::Display for ThresholdBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdBase::Reduced => "reduced",
            ThresholdBase::Original => "original",
        })
    }
}

impl std::str::FromStr for ThresholdBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(ThresholdBase::Reduced),
            "original" => Ok(ThresholdBase::Original),
            other => Err(Error::Config(format!(
                "unknown threshold base {other:?}: expected reduced or original"
            ))),
        }
    }
}

/// Pipeline parameters. Level 1 is bounded by an absolute support floor;
/// level 2 uses percentage thresholds like the flat miners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultilevelParams {
    pub l2_min_support_pct: f64,
    pub l2_min_confidence_pct: f64,
    /// Minimum absolute support for level-1 candidate enumeration. Support-1
    /// patterns can never generalize and explode combinatorially, so the
    /// floor defaults to 2. The average-support cut is computed over the
    /// floored candidates only.
    pub l1_floor_count: usize,
    /// When set, only the `n` best-ranked rules are returned.
    pub top_n: Option<usize>,
    pub threshold_base: ThresholdBase,
}

impl MultilevelParams {
    pub fn new(l2_min_support_pct: f64, l2_min_confidence_pct: f64) -> Self {
        MultilevelParams {
            l2_min_support_pct,
            l2_min_confidence_pct,
            l1_floor_count: 2,
            top_n: None,
            threshold_base: ThresholdBase::Reduced,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.l2_min_support_pct.is_finite()
            || self.l2_min_support_pct <= 0.0
            || self.l2_min_support_pct > 100.0
        {
            return Err(Error::Mining(format!(
                "l2_min_support_pct must be in (0, 100], got {}",
                self.l2_min_support_pct
            )));
        }
        if !self.l2_min_confidence_pct.is_finite()
            || !(0.0..=100.0).contains(&self.l2_min_confidence_pct)
        {
            return Err(Error::Mining(format!(
                "l2_min_confidence_pct must be in [0, 100], got {}",
                self.l2_min_confidence_pct
            )));
        }
        if self.l1_floor_count == 0 {
            return Err(Error::Mining(
                "l1_floor_count must be at least 1 (0 admits never-seen patterns)".into(),
            ));
        }
        Ok(())
    }
}

/// What the service-level pass found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level1Result {
    /// Service-level patterns of length ≥ 2 with support ≥ the floor,
    /// canonically ordered.
    pub candidates: Vec<Pattern>,
    /// Arithmetic mean of the candidates' support counts.
    pub average_support: f64,
    /// Candidates with support strictly above the average. Ties fall below
    /// the cut, so uniform supports keep nothing.
    pub kept: Vec<Pattern>,
    /// Ids of the sessions that survive reduction. Empty until the pipeline
    /// runs [`reduce_log`]; [`recommend`] fills it in.
    pub reduced_session_ids: Vec<String>,
}

/// Per-stage counters for one pipeline run, written next to the rules so a
/// run can be audited without re-mining.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTrace {
    pub l1_candidate_count: usize,
    pub l1_average_support: f64,
    pub l1_kept_count: usize,
    pub original_session_count: usize,
    pub reduced_session_count: usize,
    pub l2_candidate_count: usize,
    pub l2_frequent_count: usize,
    /// Rules that passed the confidence filter, before any top-n truncation.
    pub rule_count: usize,
}

impl StageTrace {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::json(path, e))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<StageTrace> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::json(path, e))
    }
}

/// Everything a pipeline run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub level1: Level1Result,
    /// The operation-level frequent set mined from the reduced log.
    pub frequent: FrequentSet,
    /// Ranked rules; truncated to `top_n` when the parameter is set.
    pub rules: Vec<AssociationRule>,
    /// Aggregate counters: candidates and frequent patterns summed over both
    /// levels, rule count before truncation.
    pub stats: MiningStats,
    pub trace: StageTrace,
}

/// Mines the service level: every pattern of length ≥ 2 whose absolute
/// support reaches `l1_floor_count`, the average support over them, and the
/// strictly-above-average survivors.
pub fn level1_mine(sessions: &[Session], l1_floor_count: usize) -> Result<Level1Result> {
    if l1_floor_count == 0 {
        return Err(Error::Mining(
            "l1_floor_count must be at least 1 (0 admits never-seen patterns)".into(),
        ));
    }
    let log = ProjectedLog::build(sessions, HierarchyLevel::Service);
    let (found, _explored) = grow(&log, l1_floor_count, 2, None);
    if found.is_empty() {
        return Err(Error::Mining(format!(
            "no service-level pattern of length >= 2 has support >= {l1_floor_count}: \
             lower the floor or supply a larger log"
        )));
    }
    let candidates = into_patterns(found, &log);
    let average_support =
        candidates.iter().map(|p| p.support_count).sum::<usize>() as f64 / candidates.len() as f64;
    let kept: Vec<Pattern> = candidates
        .iter()
        .filter(|p| p.support_count as f64 > average_support)
        .cloned()
        .collect();
    Ok(Level1Result {
        candidates,
        average_support,
        kept,
        reduced_session_ids: Vec::new(),
    })
}

/// Keeps exactly the sessions whose service-level projection contains at
/// least one kept pattern, with their full operation-level detail intact.
pub fn reduce_log(sessions: &[Session], kept: &[Pattern]) -> Result<Vec<Session>> {
    if kept.is_empty() {
        return Err(Error::Mining(
            "no level-1 pattern survived the average-support threshold; \
             nothing can qualify sessions for level 2"
            .into(),
        ));
    }
    let reduced: Vec<Session> = sessions
        .iter()
        .filter(|session| {
            let projection = project_service_level(session);
            kept.iter().any(|p| is_subsequence(&p.items, &projection))
        })
        .cloned()
        .collect();
    if reduced.is_empty() {
        return Err(Error::Mining(
            "log reduction retained zero sessions: thresholds too strict for this log".into(),
        ));
    }
    Ok(reduced)
}

/// Mines the reduced log at the operation level. The percentage threshold is
/// taken of the reduced session count by default, or of `original_total`
/// under [`ThresholdBase::Original`]; reported support percentages are
/// always relative to the sessions actually mined (the reduced count).
pub fn level2_mine(
    reduced: &[Session],
    original_total: usize,
    params: &MultilevelParams,
) -> Result<FrequentSet> {
    params.validate()?;
    if reduced.is_empty() {
        return Err(Error::Mining("the reduced log is empty".into()));
    }
    let base_total = match params.threshold_base {
        ThresholdBase::Reduced => reduced.len(),
        ThresholdBase::Original => original_total,
    };
    let min_count = min_count_for_pct(params.l2_min_support_pct, base_total);
    let log = ProjectedLog::build(reduced, HierarchyLevel::Operation);
    let (found, explored) = grow(&log, min_count, 1, None);
    let patterns = into_patterns(found, &log);
    let stats = MiningStats {
        candidate_count: explored,
        frequent_count: patterns.len(),
        rule_count: 0,
    };
    Ok(FrequentSet {
        level: HierarchyLevel::Operation,
        total_sessions: reduced.len(),
        patterns,
        stats,
    })
}

/// Runs the whole pipeline: level-1 mining, reduction, level-2 mining, rule
/// generation, ranking, and optional top-n truncation. Stage failures carry
/// the stage name.
pub fn recommend(sessions: &[Session], params: &MultilevelParams) -> Result<Recommendation> {
    params.validate()?;
    let mut level1 =
        level1_mine(sessions, params.l1_floor_count).map_err(Error::at_stage("level-1 mining"))?;
    let reduced = reduce_log(sessions, &level1.kept).map_err(Error::at_stage("log reduction"))?;
    level1.reduced_session_ids = reduced.iter().map(|s| s.id.clone()).collect();
    let frequent =
        level2_mine(&reduced, sessions.len(), params).map_err(Error::at_stage("level-2 mining"))?;
    let mut rules = generate_rules(&frequent, &reduced, params.l2_min_confidence_pct)
        .map_err(Error::at_stage("rule generation"))?;
    rank_rules(&mut rules);
    let full_rule_count = rules.len();
    if let Some(n) = params.top_n {
        rules = top_n(&rules, n);
    }

    let trace = StageTrace {
        l1_candidate_count: level1.candidates.len(),
        l1_average_support: level1.average_support,
        l1_kept_count: level1.kept.len(),
        original_session_count: sessions.len(),
        reduced_session_count: reduced.len(),
        l2_candidate_count: frequent.stats.candidate_count,
        l2_frequent_count: frequent.stats.frequent_count,
        rule_count: full_rule_count,
    };
    let stats = MiningStats {
        candidate_count: level1.candidates.len() + frequent.stats.candidate_count,
        frequent_count: level1.kept.len() + frequent.stats.frequent_count,
        rule_count: full_rule_count,
    };
    Ok(Recommendation {
        level1,
        frequent,
        rules,
        stats,
        trace,
    })
}
